//! Auto- and cross-correlation demerit factors and the Pursley-Sarwate criterion.
//!
//! Sums of squared correlations are accumulated exactly; only the final ratios are
//! floating point.

use crate::seqcore::{BinarySequence, SeqError, SequencePair};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemeritReport {
    pub adf_a: f64,
    pub adf_b: f64,
    pub cdf: f64,
    pub psc: f64,
}

/// `sum_{tau=1-n}^{n-1} rho_{a,b}(tau)^2`.
pub fn cdf_numerator(a: &BinarySequence, b: &BinarySequence) -> Result<u64, SeqError> {
    let n = a.len() as isize;
    let mut total = 0u64;
    for t in 1 - n..n {
        let r = a.accf(b, t)?;
        total += (r * r) as u64;
    }
    Ok(total)
}

/// `2 * sum_{tau=1}^{n-1} rho_a(tau)^2`.
pub fn adf_numerator(a: &BinarySequence) -> u64 {
    (1..a.len() as isize).map(|t| a.aacf(t).pow(2) as u64).sum::<u64>() * 2
}

pub fn cdf(a: &BinarySequence, b: &BinarySequence) -> Result<f64, SeqError> {
    let n = a.len() as f64;
    Ok(cdf_numerator(a, b)? as f64 / (n * n))
}

pub fn adf(a: &BinarySequence) -> f64 {
    let n = a.len() as f64;
    adf_numerator(a) as f64 / (n * n)
}

pub fn psc(p: &SequencePair) -> DemeritReport {
    let adf_a = adf(&p.a);
    let adf_b = adf(&p.b);
    let cdf = cdf(&p.a, &p.b).expect("pair lengths agree");
    DemeritReport { adf_a, adf_b, cdf, psc: (adf_a * adf_b).sqrt() + cdf }
}
