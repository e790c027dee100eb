//! Multi-edge-type ensemble specifications.
//!
//! Ensembles are declarative inputs read from plain-text files:
//!
//! ```text
//! # comment
//! rate 0.1
//! edge_types 3
//! var <fraction> <deg_1> ... <deg_E>
//! chk <fraction> <deg_1> ... <deg_E>
//! ```
//!
//! Fractions are node counts relative to the code length n, for variable and
//! check classes alike.

use std::path::Path;

use crate::error::{Error, Result};

/// Allowed relative socket imbalance per edge type.
const SOCKET_TOLERANCE: f64 = 0.005;

/// One node class: a fraction of n nodes sharing a degree vector.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeClass {
    pub fraction: f64,
    /// Degree per edge type.
    pub degrees: Vec<u32>,
}

impl NodeClass {
    pub fn total_degree(&self) -> u32 {
        self.degrees.iter().sum()
    }
}

/// Validated multi-edge-type degree distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiEdgeEnsemble {
    pub edge_types: usize,
    pub variable_classes: Vec<NodeClass>,
    pub check_classes: Vec<NodeClass>,
    pub design_rate: f64,
}

impl MultiEdgeEnsemble {
    /// Variable-side sockets per n for one edge type.
    pub fn var_sockets(&self, edge_type: usize) -> f64 {
        self.variable_classes
            .iter()
            .map(|c| c.fraction * c.degrees[edge_type] as f64)
            .sum()
    }

    /// Check-side sockets per n for one edge type.
    pub fn chk_sockets(&self, edge_type: usize) -> f64 {
        self.check_classes
            .iter()
            .map(|c| c.fraction * c.degrees[edge_type] as f64)
            .sum()
    }

    /// Check nodes per n, i.e. m/n.
    pub fn check_fraction(&self) -> f64 {
        self.check_classes.iter().map(|c| c.fraction).sum()
    }

    /// Average edges per variable node.
    pub fn edges_per_bit(&self) -> f64 {
        (0..self.edge_types).map(|e| self.var_sockets(e)).sum()
    }
}

/// Parses and validates an ensemble document.
pub fn load_ensemble(text: &str) -> Result<MultiEdgeEnsemble> {
    let mut rate: Option<f64> = None;
    let mut edge_types: Option<usize> = None;
    let mut variable_classes = Vec::new();
    let mut check_classes = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tok = line.split_whitespace();
        let key = tok.next().unwrap();
        let parse_err = |msg: String| Error::Parse {
            line: line_no,
            msg,
        };
        match key {
            "rate" => {
                let v: f64 = tok
                    .next()
                    .ok_or_else(|| parse_err("rate needs a value".into()))?
                    .parse()
                    .map_err(|e| parse_err(format!("bad rate: {e}")))?;
                if !(0.0..1.0).contains(&v) || v == 0.0 {
                    return Err(parse_err(format!("rate must be in (0,1), got {v}")));
                }
                rate = Some(v);
            }
            "edge_types" => {
                let v: usize = tok
                    .next()
                    .ok_or_else(|| parse_err("edge_types needs a value".into()))?
                    .parse()
                    .map_err(|e| parse_err(format!("bad edge_types: {e}")))?;
                if v == 0 {
                    return Err(parse_err("edge_types must be positive".into()));
                }
                edge_types = Some(v);
            }
            "var" | "chk" => {
                let e = edge_types
                    .ok_or_else(|| parse_err("edge_types must precede node classes".into()))?;
                let fraction: f64 = tok
                    .next()
                    .ok_or_else(|| parse_err(format!("{key} needs a fraction")))?
                    .parse()
                    .map_err(|err| parse_err(format!("bad fraction: {err}")))?;
                if !(fraction > 0.0 && fraction.is_finite()) {
                    return Err(parse_err(format!("fraction must be positive, got {fraction}")));
                }
                let degrees: Vec<u32> = tok
                    .map(|t| t.parse::<u32>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|err| parse_err(format!("bad degree: {err}")))?;
                if degrees.len() != e {
                    return Err(parse_err(format!(
                        "expected {e} degrees, got {}",
                        degrees.len()
                    )));
                }
                let class = NodeClass { fraction, degrees };
                if class.total_degree() == 0 {
                    return Err(parse_err("node class with all-zero degrees".into()));
                }
                if key == "var" {
                    variable_classes.push(class);
                } else {
                    check_classes.push(class);
                }
            }
            other => {
                return Err(parse_err(format!("unknown directive '{other}'")));
            }
        }
    }

    let rate = rate.ok_or(Error::EnsembleValidation("missing 'rate' line".into()))?;
    let edge_types = edge_types.ok_or(Error::EnsembleValidation(
        "missing 'edge_types' line".into(),
    ))?;
    if variable_classes.is_empty() || check_classes.is_empty() {
        return Err(Error::EnsembleValidation(
            "need at least one variable and one check class".into(),
        ));
    }

    let var_total: f64 = variable_classes.iter().map(|c| c.fraction).sum();
    if (var_total - 1.0).abs() > 1e-6 {
        return Err(Error::EnsembleValidation(format!(
            "variable fractions must sum to 1, got {var_total}"
        )));
    }

    let ensemble = MultiEdgeEnsemble {
        edge_types,
        variable_classes,
        check_classes,
        design_rate: 0.0,
    };

    for e in 0..edge_types {
        let vs = ensemble.var_sockets(e);
        let cs = ensemble.chk_sockets(e);
        let scale = vs.max(cs).max(f64::MIN_POSITIVE);
        if (vs - cs).abs() / scale > SOCKET_TOLERANCE {
            return Err(Error::EnsembleValidation(format!(
                "socket imbalance on edge type {}: variable side {vs:.6}, check side {cs:.6} per n",
                e + 1
            )));
        }
    }

    let design_rate = 1.0 - ensemble.check_fraction();
    if (design_rate - rate).abs() > 1e-3 {
        return Err(Error::EnsembleValidation(format!(
            "declared rate {rate} but node counts give {design_rate:.6}"
        )));
    }

    Ok(MultiEdgeEnsemble {
        design_rate,
        ..ensemble
    })
}

/// Reads an ensemble from a file.
pub fn load_ensemble_path(path: impl AsRef<Path>) -> Result<MultiEdgeEnsemble> {
    let text = std::fs::read_to_string(path)?;
    load_ensemble(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const REGULAR_3_6: &str = "\
rate 0.5
edge_types 1
var 1.0 3
chk 0.5 6
";

    #[test]
    fn regular_ensemble_rate() {
        let e = load_ensemble(REGULAR_3_6).unwrap();
        assert_eq!(e.edge_types, 1);
        assert!((e.design_rate - 0.5).abs() < 1e-12);
        assert!((e.edges_per_bit() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let text = "# header\n\nrate 0.5\nedge_types 1\nvar 1.0 3 # inline\nchk 0.5 6\n";
        assert!(load_ensemble(text).is_ok());
    }

    #[test]
    fn socket_imbalance_names_edge_type() {
        let text = "rate 0.5\nedge_types 2\nvar 1.0 3 1\nchk 0.5 6 1\n";
        // type 2: var side 1.0, check side 0.5 -> imbalance
        let err = load_ensemble(text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("edge type 2"), "{msg}");
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let text = "rate 0.5\nedge_types 1\nvar one 3\nchk 0.5 6\n";
        match load_ensemble(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn wrong_rate_rejected() {
        let text = "rate 0.25\nedge_types 1\nvar 1.0 3\nchk 0.5 6\n";
        assert!(matches!(
            load_ensemble(text),
            Err(Error::EnsembleValidation(_))
        ));
    }

    #[test]
    fn degree_count_mismatch_rejected() {
        let text = "rate 0.5\nedge_types 2\nvar 1.0 3\nchk 0.5 6 0\n";
        assert!(matches!(load_ensemble(text), Err(Error::Parse { .. })));
    }
}
