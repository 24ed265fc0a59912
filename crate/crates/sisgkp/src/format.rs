//! JSON code documents and CSV helpers.

use std::fmt::Write as _;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use sisgkp_core::ringquot::{RingElem, RingSymMat};
use sisgkp_core::siscode::{Construction, GkpCode, SymMatModQ};

/// Stamped into every CSV header and JSON document.
pub const SIGMA_CONVENTION: &str = "sigma is the standard deviation per coordinate of R^{2nk}";

/// A serialized code. `H` is stored row-major: an `n × n` array of entries
/// for SIS codes, a `k × k` array of `n`-coefficient polynomials (lowest
/// degree first) for module codes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum CodeDocument {
    Sis {
        n: usize,
        q: u64,
        lambda: u64,
        #[serde(rename = "H")]
        h: Vec<Vec<u64>>,
        seed: Option<u64>,
    },
    Module {
        n: usize,
        k: usize,
        q: u64,
        lambda: u64,
        #[serde(rename = "H")]
        h: Vec<Vec<Vec<u64>>>,
        seed: Option<u64>,
    },
}

impl CodeDocument {
    pub fn from_code(code: &GkpCode, seed: Option<u64>) -> Self {
        match code.construction() {
            Construction::Sis(h) => CodeDocument::Sis {
                n: h.n(),
                q: h.q(),
                lambda: code.lambda(),
                h: h.entries().chunks(h.n()).map(<[u64]>::to_vec).collect(),
                seed,
            },
            Construction::Module(h) => CodeDocument::Module {
                n: h.n(),
                k: h.k(),
                q: h.q(),
                lambda: code.lambda(),
                h: (0..h.k())
                    .map(|i| (0..h.k()).map(|j| h.get(i, j).coeffs().to_vec()).collect())
                    .collect(),
                seed,
            },
        }
    }

    /// Rebuilds the code. Composite moduli are accepted.
    pub fn to_code(&self) -> sisgkp_core::Result<GkpCode> {
        match self {
            CodeDocument::Sis {
                n, q, lambda, h, ..
            } => {
                if h.len() != *n || h.iter().any(|r| r.len() != *n) {
                    return Err(sisgkp_core::Error::Dimension(format!(
                        "H must be {n} x {n}"
                    )));
                }
                let m = SymMatModQ::new_any_modulus(*n, *q, h.concat())?;
                GkpCode::sis(m, *lambda)
            }
            CodeDocument::Module {
                n, k, q, lambda, h, ..
            } => {
                if h.len() != *k || h.iter().any(|r| r.len() != *k) {
                    return Err(sisgkp_core::Error::Dimension(format!(
                        "H must be {k} x {k}"
                    )));
                }
                let entries = h
                    .iter()
                    .flatten()
                    .map(|c| {
                        if c.iter().any(|&x| x >= *q) {
                            return Err(sisgkp_core::Error::InvalidParameter(format!(
                                "coefficient not reduced mod {q}"
                            )));
                        }
                        RingElem::new(*n, *q, c.clone())
                    })
                    .collect::<sisgkp_core::Result<Vec<_>>>()?;
                GkpCode::module(RingSymMat::new(*k, entries)?, *lambda)
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

/// `p/q` with the denominator always written.
pub fn rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses the output of [`rational`].
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let (p, q) = s.split_once('/')?;
    let q: num_bigint::BigInt = q.parse().ok()?;
    if q == num_bigint::BigInt::from(0) {
        return None;
    }
    Some(BigRational::new(p.parse().ok()?, q))
}

/// Accumulates LF-terminated CSV lines. Fields are numbers or fixed tokens
/// without separators, so no quoting is needed.
#[derive(Clone, Debug, Default)]
pub struct CsvBuf {
    out: String,
}

impl CsvBuf {
    pub fn new(comments: &[String], header: &[&str]) -> Self {
        let mut out = String::new();
        for c in comments {
            let _ = writeln!(out, "# {c}");
        }
        out.push_str(&header.join(","));
        out.push('\n');
        Self { out }
    }

    pub fn row(&mut self, fields: &[String]) {
        debug_assert!(fields.iter().all(|f| !f.contains([',', '\n'])));
        self.out.push_str(&fields.join(","));
        self.out.push('\n');
    }

    pub fn finish(self) -> String {
        self.out
    }
}

/// Splits CSV text into header and rows, skipping `#` comment lines.
pub fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines
        .next()
        .map(|h| h.split(',').map(str::to_owned).collect())
        .unwrap_or_default();
    let rows = lines
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect();
    (header, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use sisgkp_core::seed::rng_from_seed;

    #[test]
    fn sis_document_round_trip() {
        let h = SymMatModQ::sample_any_modulus(3, 256, &mut rng_from_seed(1)).unwrap();
        let code = GkpCode::sis(h, 2).unwrap();
        let doc = CodeDocument::from_code(&code, Some(99));
        let text = doc.to_json();
        let back = CodeDocument::from_json(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_json(), text);
        assert_eq!(back.to_code().unwrap(), code);
        assert!(text.starts_with(r#"{"kind":"sis","n":3,"q":256,"lambda":2,"H":[["#));
    }

    #[test]
    fn module_document_round_trip() {
        let h = RingSymMat::sample(4, 2, 17, &mut rng_from_seed(2)).unwrap();
        let code = GkpCode::module(h, 3).unwrap();
        let doc = CodeDocument::from_code(&code, None);
        let text = doc.to_json();
        let back = CodeDocument::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text);
        assert_eq!(back.to_code().unwrap(), code);
    }

    #[test]
    fn rejects_asymmetric_documents() {
        let doc = CodeDocument::from_json(
            r#"{"kind":"sis","n":2,"q":5,"lambda":2,"H":[[1,2],[3,4]],"seed":null}"#,
        )
        .unwrap();
        assert!(doc.to_code().is_err());
        assert!(CodeDocument::from_json(
            r#"{"kind":"sis","n":1,"q":5,"lambda":2,"H":[[1]],"extra":1}"#
        )
        .is_err());
    }

    #[test]
    fn rationals() {
        let r = BigRational::new(4.into(), 6.into());
        assert_eq!(rational(&r), "2/3");
        assert_eq!(rational(&BigRational::from_integer(5.into())), "5/1");
        assert_eq!(parse_rational("2/3"), Some(r));
        assert_eq!(parse_rational("2/0"), None);
    }

    #[test]
    fn csv_layout() {
        let mut c = CsvBuf::new(&["note".into()], &["a", "b"]);
        c.row(&["1".into(), "0.5".into()]);
        let text = c.finish();
        assert_eq!(text, "# note\na,b\n1,0.5\n");
        let (h, rows) = parse_csv(&text);
        assert_eq!(h, ["a", "b"]);
        assert_eq!(rows, [["1", "0.5"]]);
    }
}
