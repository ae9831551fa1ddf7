//! Zero-correlation-zone width and optimality verdicts.

use std::fmt;
use std::str::FromStr;

use crate::seqcore::SequencePair;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    /// Maximal zone and every out-of-zone sum has magnitude 2.
    Optimal,
    /// Maximal zone, some out-of-zone sum larger than 2.
    ZOptimal,
    SubOptimal,
}

impl Category {
    pub fn as_str(&self) -> &'static str {
        match self {
            Category::Optimal => "optimal",
            Category::ZOptimal => "z-optimal",
            Category::SubOptimal => "sub-optimal",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "optimal" => Ok(Category::Optimal),
            "z-optimal" | "zoptimal" => Ok(Category::ZOptimal),
            "sub-optimal" | "suboptimal" => Ok(Category::SubOptimal),
            other => Err(format!("unknown category {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Classification {
    pub n: usize,
    pub zcz_width: usize,
    /// Largest `|rho_a(tau) + rho_b(tau)|` over `tau = (n+1)/2 .. n-1`, whatever the zone.
    pub max_out_of_zone: u32,
    pub category: Category,
}

/// Largest `Z` with `rho_a(tau) + rho_b(tau) == 0` for all `1 <= tau <= Z-1`.
pub fn zcz_width(p: &SequencePair) -> usize {
    let n = p.len();
    (1..n).find(|&t| p.a.aacf(t as isize) + p.b.aacf(t as isize) != 0).unwrap_or(n)
}

pub fn classify(p: &SequencePair) -> Classification {
    let n = p.len();
    let full_zone = n.div_ceil(2);
    let z = zcz_width(p);
    let mut max_out = 0u32;
    let mut all_two = true;
    for t in full_zone..n {
        let s = (p.a.aacf(t as isize) + p.b.aacf(t as isize)).unsigned_abs() as u32;
        max_out = max_out.max(s);
        all_two &= s == 2;
    }
    let category = if z < full_zone {
        Category::SubOptimal
    } else if all_two {
        Category::Optimal
    } else {
        Category::ZOptimal
    };
    Classification { n, zcz_width: z, max_out_of_zone: max_out, category }
}

/// The mirrored-position parity conditions every Z-optimal pair satisfies:
/// `a_0 + a_{n-1} + b_0 + b_{n-1}` even and `a_r + a_{n-1-r} + b_r + b_{n-1-r}` odd for
/// `1 <= r <= (n-3)/2`. For `n = 3` only the end condition applies.
pub fn check_end_parity(p: &SequencePair) -> bool {
    let n = p.len();
    let (a, b) = (&p.a, &p.b);
    if (a.bit(0) + a.bit(n - 1) + b.bit(0) + b.bit(n - 1)) % 2 != 0 {
        return false;
    }
    (1..=(n.saturating_sub(3)) / 2).all(|r| (a.bit(r) + a.bit(n - 1 - r) + b.bit(r) + b.bit(n - 1 - r)) % 2 == 1)
}
