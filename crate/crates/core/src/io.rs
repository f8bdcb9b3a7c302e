//! JSON and CSV interchange.
//!
//! Matrices are `{"dim": d, "entries": [[[re, im], …], …]}` in row-major
//! order. Cone vectors are `{"dim": d, "components": [...]}` or a bare array
//! whose length is a perfect square. Measurements are `{"dim": d, "kraus":
//! [matrix, …]}` or `{"dim": d, "effects": [matrix, …]}`. All numeric output
//! is rounded to 12 significant digits.

use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cone::ConeVector;
use crate::error::{ConalError, Result};
use crate::hermitian::{ComplexMatrix, HermitianMatrix};
use crate::measurement::{GeneralizedMeasurement, Povm};
use crate::tradeoff::TradeoffPoint;

/// Significant digits of every number written.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds `x` to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Shortest decimal text of `round_sig(x)`; `-0` prints as `0`.
pub fn format_sig(x: f64) -> String {
    let r = round_sig(x);
    if r == 0.0 {
        "0".into()
    } else {
        format!("{r}")
    }
}

fn malformed(e: serde_json::Error) -> ConalError {
    ConalError::Malformed(e.to_string())
}

/// Wire form of a complex square matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl MatrixJson {
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        Self {
            dim: rows.len(),
            entries: rows
                .iter()
                .map(|r| r.iter().map(|z| [round_sig(z.re), round_sig(z.im)]).collect())
                .collect(),
        }
    }

    pub fn to_dmatrix(&self) -> Result<DMatrix<Complex64>> {
        let d = self.dim;
        if self.entries.len() != d || self.entries.iter().any(|r| r.len() != d) {
            return Err(ConalError::Malformed(format!("matrix entries are not {d}×{d}")));
        }
        let flat: Vec<f64> = self.entries.iter().flatten().flatten().copied().collect();
        if flat.iter().any(|x| !x.is_finite()) {
            return Err(ConalError::Malformed("non-finite matrix entry".into()));
        }
        Ok(DMatrix::from_fn(d, d, |i, j| {
            let [re, im] = self.entries[i][j];
            Complex64::new(re, im)
        }))
    }

    pub fn to_complex(&self) -> Result<ComplexMatrix> {
        ComplexMatrix::new(self.to_dmatrix()?)
    }

    pub fn to_hermitian(&self) -> Result<HermitianMatrix> {
        HermitianMatrix::new(self.to_dmatrix()?)
    }
}

pub fn parse_matrix(text: &str) -> Result<MatrixJson> {
    serde_json::from_str(text).map_err(malformed)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum VectorJson {
    Tagged(ConeVector),
    Bare(Vec<f64>),
}

pub fn parse_vector(text: &str) -> Result<ConeVector> {
    match serde_json::from_str(text).map_err(malformed)? {
        VectorJson::Tagged(v) => Ok(v),
        VectorJson::Bare(c) => {
            let d = (c.len() as f64).sqrt().round() as usize;
            if d * d != c.len() {
                return Err(ConalError::Malformed(format!(
                    "vector length {} is not a perfect square",
                    c.len()
                )));
            }
            ConeVector::new(d, c)
        }
    }
}

/// Rounded wire form of a cone vector.
pub fn vector_json(v: &ConeVector) -> serde_json::Value {
    serde_json::json!({
        "dim": v.dim(),
        "components": v.components().iter().map(|&x| round_sig(x)).collect::<Vec<_>>(),
    })
}

pub fn real_rows_json(rows: &[Vec<f64>]) -> serde_json::Value {
    rows.iter()
        .map(|r| r.iter().map(|&x| round_sig(x)).collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .into()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasurementRepr {
    dim: usize,
    #[serde(default)]
    kraus: Option<Vec<MatrixJson>>,
    #[serde(default)]
    effects: Option<Vec<MatrixJson>>,
}

/// A measurement as supplied: Kraus operators, or effects only.
#[derive(Clone, Debug, PartialEq)]
pub enum MeasurementSpec {
    Kraus(Vec<ComplexMatrix>),
    Effects(Vec<HermitianMatrix>),
}

impl MeasurementSpec {
    /// Validated measurement; effect-only input uses `M_m = √E_m`.
    pub fn into_measurement(self) -> Result<GeneralizedMeasurement> {
        match self {
            MeasurementSpec::Kraus(k) => GeneralizedMeasurement::new(k),
            MeasurementSpec::Effects(e) => Povm::new(e)?.to_measurement(),
        }
    }
}

pub fn parse_measurement(text: &str) -> Result<MeasurementSpec> {
    let repr: MeasurementRepr = serde_json::from_str(text).map_err(malformed)?;
    let check = |m: &MatrixJson| {
        if m.dim == repr.dim {
            Ok(())
        } else {
            Err(ConalError::DimensionMismatch {
                expected: repr.dim,
                found: m.dim,
            })
        }
    };
    match (repr.kraus, repr.effects) {
        (Some(k), None) => {
            k.iter().try_for_each(check)?;
            Ok(MeasurementSpec::Kraus(
                k.iter().map(MatrixJson::to_complex).collect::<Result<_>>()?,
            ))
        }
        (None, Some(e)) => {
            e.iter().try_for_each(check)?;
            Ok(MeasurementSpec::Effects(
                e.iter().map(MatrixJson::to_hermitian).collect::<Result<_>>()?,
            ))
        }
        _ => Err(ConalError::Malformed(
            "measurement needs exactly one of \"kraus\" or \"effects\"".into(),
        )),
    }
}

/// Parses `a:b:n` into `n` evenly spaced values from `a` to `b` inclusive.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || ConalError::Malformed(format!("grid `{spec}` is not of the form a:b:n"));
    let [a, b, n] = parts.as_slice() else {
        return Err(bad());
    };
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if !a.is_finite() || !b.is_finite() || n == 0 {
        return Err(bad());
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    let step = (b - a) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| if i == n - 1 { b } else { a + step * i as f64 })
        .collect())
}

pub const CSV_HEADER: &str = "c,beta,I_bits,D";
pub const CSV_EXTENDED: &str = "p0,q0,omega0,delta0,p1,q1,omega1,delta1";

/// Writes one row per point; `extended` appends the per-outcome columns.
pub fn write_csv<W: Write>(out: &mut W, points: &[TradeoffPoint], extended: bool) -> std::io::Result<()> {
    if extended {
        writeln!(out, "{CSV_HEADER},{CSV_EXTENDED}")?;
    } else {
        writeln!(out, "{CSV_HEADER}")?;
    }
    for p in points {
        let mut fields = vec![
            format_sig(p.c),
            format_sig(p.beta),
            format_sig(p.info),
            format_sig(p.disturbance),
        ];
        if extended {
            for m in 0..2 {
                match p.per_outcome.get(m) {
                    Some(t) => fields.extend([t.p, t.q, t.angles.omega_m, t.angles.delta_m].map(format_sig)),
                    None => fields.extend(std::iter::repeat_n(String::new(), 4)),
                }
            }
        }
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

/// Parses CSV written by [`write_csv`] back into `(c, beta, I, D)` rows.
pub fn read_csv(text: &str) -> Result<Vec<[f64; 4]>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.starts_with(CSV_HEADER) => {}
        _ => return Err(ConalError::Malformed("missing CSV header".into())),
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let f: Vec<&str> = line.split(',').collect();
            let bad = || ConalError::Malformed(format!("CSV line {}: expected at least 4 numeric fields", i + 2));
            if f.len() < 4 {
                return Err(bad());
            }
            let mut row = [0.0; 4];
            for (slot, s) in row.iter_mut().zip(&f) {
                *slot = s.parse().map_err(|_| bad())?;
            }
            Ok(row)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tradeoff::closed_form_point;

    #[test]
    fn rounding() {
        assert_eq!(format_sig(0.1 + 0.2), "0.3");
        assert_eq!(format_sig(-0.0), "0");
        assert_eq!(round_sig(1.234_567_890_123_456), 1.234_567_890_12);
        assert_eq!(round_sig(f64::INFINITY), f64::INFINITY);
    }

    #[test]
    fn matrix_parsing() {
        let m = parse_matrix(r#"{"dim":2,"entries":[[[1,0],[0,-1]],[[0,1],[0,0]]]}"#).unwrap();
        assert!(m.to_complex().is_ok());
        assert!(m.to_hermitian().is_ok());
        let bad = parse_matrix(r#"{"dim":3,"entries":[[[1,0],[0,0]],[[0,0],[1,0]]]}"#).unwrap();
        assert!(bad.to_complex().is_err());
        let err = parse_matrix("{\"dim\":2,\n\"entries\": [oops]}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        assert!(parse_matrix(r#"{"dim":2,"entries":[[[NaN,0]]]}"#).is_err());
        assert!(parse_matrix(r#"{"dim":1,"entries":[[[1e999,0]]]}"#).is_err());
    }

    #[test]
    fn vector_parsing() {
        let v = parse_vector("[1, 0, 0, 2]").unwrap();
        assert_eq!(v.dim(), 2);
        let v = parse_vector(r#"{"dim":3,"components":[1,0,0,0,0,0,0,0,0]}"#).unwrap();
        assert_eq!(v.dim(), 3);
        assert!(parse_vector("[1, 0, 0]").is_err());
        assert!(parse_vector(r#"{"dim":2,"components":[1,0]}"#).is_err());
    }

    #[test]
    fn measurement_parsing() {
        let k = r#"{"dim":2,"kraus":[{"dim":2,"entries":[[[1,0],[0,0]],[[0,0],[0,0]]]},
                                     {"dim":2,"entries":[[[0,0],[0,0]],[[0,0],[1,0]]]}]}"#;
        let m = parse_measurement(k).unwrap().into_measurement().unwrap();
        assert_eq!(m.kraus().len(), 2);
        let e = r#"{"dim":2,"effects":[{"dim":2,"entries":[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]},
                                       {"dim":2,"entries":[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]}]}"#;
        assert!(parse_measurement(e).unwrap().into_measurement().is_ok());
        let incomplete = r#"{"dim":2,"effects":[{"dim":2,"entries":[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]}]}"#;
        assert!(matches!(
            parse_measurement(incomplete).unwrap().into_measurement(),
            Err(ConalError::Validation(_))
        ));
        assert!(parse_measurement(r#"{"dim":2}"#).is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("0.2:0.2:1").unwrap(), vec![0.2]);
        assert_eq!(parse_grid("0:1:11").unwrap()[10], 1.0);
        for bad in ["0:1", "0:1:0", "a:1:3", "0:inf:3", "0:1:-2"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn csv_round_trip() {
        let points: Vec<_> = [0.0, 0.35, 0.8, 1.0]
            .iter()
            .map(|&b| closed_form_point(0.62, b).unwrap())
            .collect();
        let mut buf = Vec::new();
        write_csv(&mut buf, &points, true).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("c,beta,I_bits,D,p0,q0,omega0,delta0,p1,q1,omega1,delta1\n"));
        let rows = read_csv(&text).unwrap();
        for (row, p) in rows.iter().zip(&points) {
            for (got, want) in row.iter().zip([p.c, p.beta, p.info, p.disturbance]) {
                assert!((got - want).abs() <= 1e-11, "{got} vs {want}");
            }
        }
    }
}
