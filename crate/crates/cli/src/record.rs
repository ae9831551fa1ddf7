use std::fmt::Write as _;

use obzcp::{classify, psc, Category, SequencePair};

/// One result line: a pair with its verdict and, optionally, demerit values and the
/// chunk it was found in.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputRecord {
    pub n: usize,
    pub a_hex: String,
    pub b_hex: String,
    pub category: Category,
    pub zcz_width: usize,
    pub max_out_of_zone: u32,
    pub demerit: Option<Demerit>,
    pub chunk: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Demerit {
    pub psc: f64,
    pub adf_a: f64,
    pub adf_b: f64,
    pub cdf: f64,
}

pub const TSV_FIELDS: [&str; 11] =
    ["n", "a", "b", "category", "zcz_width", "max_out_of_zone", "psc", "adf_a", "adf_b", "cdf", "chunk"];

impl OutputRecord {
    pub fn from_pair(p: &SequencePair, with_demerit: bool, chunk: Option<u64>) -> Self {
        let c = classify(p);
        let demerit = with_demerit.then(|| {
            let r = psc(p);
            Demerit { psc: r.psc, adf_a: r.adf_a, adf_b: r.adf_b, cdf: r.cdf }
        });
        OutputRecord {
            n: c.n,
            a_hex: p.a.to_hex(),
            b_hex: p.b.to_hex(),
            category: c.category,
            zcz_width: c.zcz_width,
            max_out_of_zone: c.max_out_of_zone,
            demerit,
            chunk,
        }
    }

    /// Tab-separated line, `-` for absent fields. Floats use the shortest text that
    /// parses back to the same value.
    pub fn to_tsv(&self) -> String {
        let mut out = format!(
            "{}\t{}\t{}\t{}\t{}\t{}",
            self.n, self.a_hex, self.b_hex, self.category, self.zcz_width, self.max_out_of_zone
        );
        match &self.demerit {
            Some(d) => write!(out, "\t{}\t{}\t{}\t{}", d.psc, d.adf_a, d.adf_b, d.cdf).unwrap(),
            None => out.push_str("\t-\t-\t-\t-"),
        }
        match self.chunk {
            Some(c) => write!(out, "\t{c}").unwrap(),
            None => out.push_str("\t-"),
        }
        out
    }

    pub fn from_tsv(line: &str) -> Result<Self, String> {
        let f: Vec<&str> = line.trim_end_matches(['\n', '\r']).split('\t').collect();
        if f.len() != TSV_FIELDS.len() {
            return Err(format!("expected {} fields, found {}", TSV_FIELDS.len(), f.len()));
        }
        fn num<T: std::str::FromStr>(name: &str, s: &str) -> Result<T, String> {
            s.parse().map_err(|_| format!("bad {name} {s:?}"))
        }
        let demerit = if f[6..10].iter().all(|s| *s == "-") {
            None
        } else {
            Some(Demerit {
                psc: num("psc", f[6])?,
                adf_a: num("adf_a", f[7])?,
                adf_b: num("adf_b", f[8])?,
                cdf: num("cdf", f[9])?,
            })
        };
        Ok(OutputRecord {
            n: num("n", f[0])?,
            a_hex: f[1].to_string(),
            b_hex: f[2].to_string(),
            category: f[3].parse()?,
            zcz_width: num("zcz_width", f[4])?,
            max_out_of_zone: num("max_out_of_zone", f[5])?,
            demerit,
            chunk: if f[10] == "-" { None } else { Some(num("chunk", f[10])?) },
        })
    }
}

/// Formats `x` with six significant digits, fixed point.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (5 - mag).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding may carry into a new leading digit, e.g. 9.999996 -> 10.00000
    let digits = s.chars().filter(char::is_ascii_digit).collect::<String>();
    if digits.trim_start_matches('0').len() > 6 && decimals > 0 {
        format!("{x:.prec$}", prec = decimals - 1)
    } else {
        s
    }
}

/// Renders records as an aligned table with a header row.
pub fn render_table(records: &[OutputRecord]) -> String {
    let with_demerit = records.iter().any(|r| r.demerit.is_some());
    let with_chunk = records.iter().any(|r| r.chunk.is_some());
    let mut header = vec!["n", "a", "b", "category", "Z", "max"];
    if with_demerit {
        header.extend(["PSC", "ADF(a)", "ADF(b)", "CDF"]);
    }
    if with_chunk {
        header.push("chunk");
    }
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            let mut row = vec![
                r.n.to_string(),
                r.a_hex.clone(),
                r.b_hex.clone(),
                r.category.to_string(),
                r.zcz_width.to_string(),
                r.max_out_of_zone.to_string(),
            ];
            if with_demerit {
                match &r.demerit {
                    Some(d) => row.extend([d.psc, d.adf_a, d.adf_b, d.cdf].map(sig6)),
                    None => row.extend(["-"; 4].map(String::from)),
                }
            }
            if with_chunk {
                row.push(r.chunk.map_or("-".to_string(), |c| c.to_string()));
            }
            row
        })
        .collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let line = |cells: &mut dyn Iterator<Item = &str>, out: &mut String| {
        let parts: Vec<String> = cells.zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        out.push_str(parts.join("  ").trim_end());
        out.push('\n');
    };
    line(&mut header.iter().copied(), &mut out);
    for row in &rows {
        line(&mut row.iter().map(String::as_str), &mut out);
    }
    out
}
