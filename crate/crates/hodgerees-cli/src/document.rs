//! JSON document model for mixed Hodge structures.
//!
//! A document fixes the scalar backend (`"gaussian_rational"` for exact
//! arithmetic over Q(i), `"complex_f64"` for floating point), the ambient
//! dimension, and the two filtrations as lists of jump steps with basis
//! rows:
//!
//! ```json
//! {
//!   "field": "gaussian_rational",
//!   "dim": 2,
//!   "weight_filtration": [
//!     { "weight": 0, "basis": [["1", "0"]] },
//!     { "weight": 2, "basis": [["1", "0"], ["0", "1"]] }
//!   ],
//!   "hodge_filtration": [
//!     { "level": 1, "basis": [["i", "1"]] }
//!   ]
//! }
//! ```
//!
//! Filtration steps list the value at each jump; levels between jumps take
//! the previous value, the weight filtration is zero below its lowest jump,
//! and the Hodge filtration is the full space above its highest stored
//! level (reading downward).  Exact documents write every entry as a
//! rational literal string (`"a/b"`, `"a/b+c/d i"`) so no floating-point
//! value ever touches the exact backend; float documents write real entries
//! as plain numbers and complex entries as `[re, im]` pairs.  Weight bases
//! must be entrywise real in both backends.

use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use hodgerees::filtration::{Filtration, WeightFiltration};
use hodgerees::linalg::{Matrix, Subspace};
use hodgerees::mhs::MixedHodgeStructure;
use hodgerees::scalar::Scalar;
use hodgerees::{GaussianRational, MhsC64, MhsQi, C64};

/// One basis entry of a document.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    /// Rational literal `"a/b"` or `"a/b+c/d i"` (exact documents).
    Literal(String),
    /// Plain real number (float documents).
    Real(f64),
    /// `[re, im]` pair (float documents).
    Pair([f64; 2]),
}

impl Entry {
    fn describe(&self) -> String {
        match self {
            Entry::Literal(s) => format!("string {s:?}"),
            Entry::Real(v) => format!("number {v}"),
            Entry::Pair([re, im]) => format!("pair [{re}, {im}]"),
        }
    }
}

/// The scalar backend a document selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldTag {
    #[serde(rename = "gaussian_rational")]
    GaussianRational,
    #[serde(rename = "complex_f64")]
    ComplexF64,
}

impl FieldTag {
    pub fn name(self) -> &'static str {
        match self {
            FieldTag::GaussianRational => "gaussian_rational",
            FieldTag::ComplexF64 => "complex_f64",
        }
    }
}

/// One jump of the (increasing) weight filtration: the value `W_weight`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightStep {
    pub weight: i64,
    pub basis: Vec<Vec<Entry>>,
}

/// One jump of the (decreasing) Hodge filtration: the value `F^level`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HodgeStep {
    pub level: i64,
    pub basis: Vec<Vec<Entry>>,
}

/// A mixed Hodge structure as a JSON document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MhsDocument {
    pub field: FieldTag,
    pub dim: usize,
    pub weight_filtration: Vec<WeightStep>,
    pub hodge_filtration: Vec<HodgeStep>,
    /// Optional rank tolerance for the floating backend.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

/// A parsed structure over either backend.
#[derive(Debug, Clone)]
pub enum AnyMhs {
    Exact(MhsQi),
    Float(MhsC64),
}

impl MhsDocument {
    /// Read and parse a document file. Errors carry the file path and, for
    /// malformed JSON, the line/column from the JSON parser.
    pub fn from_path(path: &Path) -> Result<MhsDocument, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// Build and validate the structure the document describes.
    pub fn to_structure(&self) -> Result<AnyMhs, String> {
        match self.field {
            FieldTag::GaussianRational => {
                build(self, &qi_entry, &GaussianRational::is_real).map(AnyMhs::Exact)
            }
            FieldTag::ComplexF64 => {
                build(self, &c64_entry, &|v: &C64| v.im == 0.0).map(AnyMhs::Float)
            }
        }
    }
}

fn qi_entry(e: &Entry) -> Result<GaussianRational, String> {
    match e {
        Entry::Literal(s) => GaussianRational::from_str(s).map_err(|e| e.to_string()),
        other => Err(format!(
            "exact documents write entries as rational literal strings, found {}",
            other.describe()
        )),
    }
}

fn c64_entry(e: &Entry) -> Result<C64, String> {
    match e {
        Entry::Real(v) if v.is_finite() => Ok(C64::new(*v, 0.0)),
        Entry::Pair([re, im]) if re.is_finite() && im.is_finite() => Ok(C64::new(*re, *im)),
        Entry::Literal(_) => Err(format!(
            "float documents write entries as numbers or [re, im] pairs, found {}",
            e.describe()
        )),
        other => Err(format!("entries must be finite, found {}", other.describe())),
    }
}

fn build<K: Scalar>(
    doc: &MhsDocument,
    entry: &dyn Fn(&Entry) -> Result<K, String>,
    is_real: &dyn Fn(&K) -> bool,
) -> Result<MixedHodgeStructure<K>, String> {
    let ambient = doc.dim;
    let mut weights = Vec::new();
    for step in &doc.weight_filtration {
        let mut rows = Vec::new();
        for (i, row) in step.basis.iter().enumerate() {
            if row.len() != ambient {
                return Err(format!(
                    "dimension mismatch: weight_filtration W_{} row {} has {} entries, \
                     expected dim = {}",
                    step.weight,
                    i,
                    row.len(),
                    ambient
                ));
            }
            let mut out = Vec::with_capacity(ambient);
            for (j, e) in row.iter().enumerate() {
                let v = entry(e).map_err(|msg| {
                    format!("weight_filtration W_{} row {i} entry {j}: {msg}", step.weight)
                })?;
                if !is_real(&v) {
                    return Err(format!(
                        "weight filtration not real: W_{} row {i} entry {j} has a nonzero \
                         imaginary part",
                        step.weight
                    ));
                }
                out.push(v);
            }
            rows.push(out);
        }
        weights.push((step.weight, Subspace::from_rows(ambient, rows)));
    }
    let weight =
        WeightFiltration::from_weights(ambient, weights).map_err(|e| e.to_string())?;

    let mut levels = Vec::new();
    for step in &doc.hodge_filtration {
        let mut rows = Vec::new();
        for (i, row) in step.basis.iter().enumerate() {
            if row.len() != ambient {
                return Err(format!(
                    "dimension mismatch: hodge_filtration F^{} row {} has {} entries, \
                     expected dim = {}",
                    step.level,
                    i,
                    row.len(),
                    ambient
                ));
            }
            let mut out = Vec::with_capacity(ambient);
            for (j, e) in row.iter().enumerate() {
                let v = entry(e).map_err(|msg| {
                    format!("hodge_filtration F^{} row {i} entry {j}: {msg}", step.level)
                })?;
                out.push(v);
            }
            rows.push(out);
        }
        levels.push((step.level, Subspace::from_rows(ambient, rows)));
    }
    let hodge = Filtration::from_levels(ambient, levels).map_err(|e| e.to_string())?;

    MixedHodgeStructure::new(weight, hodge).map_err(|e| e.to_string())
}

fn rows_of<K: Scalar>(m: &Matrix<K>, f: impl Fn(&K) -> Entry) -> Vec<Vec<Entry>> {
    (0..m.rows()).map(|r| m.row(r).iter().map(&f).collect()).collect()
}

/// Serialize an exact structure as a document. The canonical (row-echelon)
/// bases of a real weight filtration have real entries, so the round trip
/// through the document is exact.
pub fn document_from_exact(h: &MhsQi) -> MhsDocument {
    MhsDocument {
        field: FieldTag::GaussianRational,
        dim: h.ambient_dim(),
        weight_filtration: h
            .weight()
            .jump_weights()
            .into_iter()
            .map(|m| WeightStep {
                weight: m,
                basis: rows_of(h.weight().value_at(m).basis(), |v| {
                    Entry::Literal(v.to_string())
                }),
            })
            .collect(),
        hodge_filtration: h
            .hodge()
            .jump_levels()
            .into_iter()
            .map(|p| HodgeStep {
                level: p,
                basis: rows_of(h.hodge().value_at(p).basis(), |v| {
                    Entry::Literal(v.to_string())
                }),
            })
            .collect(),
        tolerance: None,
    }
}

/// Serialize a floating structure as a document. Weight-basis entries are
/// written as their real parts (the structure's weight filtration is real,
/// so any imaginary parts in its canonical basis are numerical dust).
pub fn document_from_float(h: &MhsC64) -> MhsDocument {
    MhsDocument {
        field: FieldTag::ComplexF64,
        dim: h.ambient_dim(),
        weight_filtration: h
            .weight()
            .jump_weights()
            .into_iter()
            .map(|m| WeightStep {
                weight: m,
                basis: rows_of(h.weight().value_at(m).basis(), |v| Entry::Real(v.re)),
            })
            .collect(),
        hodge_filtration: h
            .hodge()
            .jump_levels()
            .into_iter()
            .map(|p| HodgeStep {
                level: p,
                basis: rows_of(h.hodge().value_at(p).basis(), |v| {
                    Entry::Pair([v.re, v.im])
                }),
            })
            .collect(),
        tolerance: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hodgerees::filtration::{Filtration, WeightFiltration};
    use hodgerees::linalg::Subspace;
    use hodgerees::GaussianRational as Qi;

    /// The two-dimensional extension with Hodge line spanned by `i·e1 + e2`:
    /// weights 0 and 2, α = 1.
    fn imaginary_extension() -> MhsQi {
        let w = WeightFiltration::from_weights(
            2,
            vec![
                (0, Subspace::from_rows(2, vec![vec![Qi::from_i64(1), Qi::from_i64(0)]])),
                (2, Subspace::full(2)),
            ],
        )
        .unwrap();
        let f = Filtration::from_levels(
            2,
            vec![(1, Subspace::from_rows(2, vec![vec![Qi::i(), Qi::from_i64(1)]]))],
        )
        .unwrap();
        MixedHodgeStructure::new(w, f).unwrap()
    }

    #[test]
    fn exact_document_round_trips_exactly() {
        let h = imaginary_extension();
        let doc = document_from_exact(&h);
        let json = serde_json::to_string_pretty(&doc).unwrap();
        let reparsed: MhsDocument = serde_json::from_str(&json).unwrap();
        let AnyMhs::Exact(h2) = reparsed.to_structure().unwrap() else {
            panic!("expected the exact backend");
        };
        assert_eq!(h.hodge_numbers(), h2.hodge_numbers());
        assert_eq!(h.alpha(), h2.alpha());
        assert_eq!(h.alpha(), 1);
    }

    #[test]
    fn float_document_round_trips_the_tables() {
        let w = WeightFiltration::from_weights(
            2,
            vec![
                (0, Subspace::from_rows(2, vec![vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]])),
                (2, Subspace::full(2)),
            ],
        )
        .unwrap();
        let f = Filtration::from_levels(
            2,
            vec![(1, Subspace::from_rows(2, vec![vec![C64::new(0.0, 1.0), C64::new(1.0, 0.0)]]))],
        )
        .unwrap();
        let h = MhsC64::new(w, f).unwrap();
        let doc = document_from_float(&h);
        let json = serde_json::to_string(&doc).unwrap();
        let reparsed: MhsDocument = serde_json::from_str(&json).unwrap();
        let AnyMhs::Float(h2) = reparsed.to_structure().unwrap() else {
            panic!("expected the float backend");
        };
        assert_eq!(h.hodge_numbers(), h2.hodge_numbers());
        assert_eq!(h.alpha(), h2.alpha());
        assert_eq!(h.alpha(), 1);
    }

    #[test]
    fn document_errors_name_the_offending_entry() {
        let mut doc = document_from_exact(&imaginary_extension());
        // Complex entry in a weight basis row.
        doc.weight_filtration[0].basis[0][0] = Entry::Literal("i".into());
        let err = doc.to_structure().unwrap_err();
        assert!(err.contains("weight filtration not real"), "got: {err}");
        assert!(err.contains("W_0 row 0 entry 0"), "got: {err}");

        // Number entry in an exact document.
        let mut doc = document_from_exact(&imaginary_extension());
        doc.hodge_filtration[0].basis[0][0] = Entry::Real(0.5);
        let err = doc.to_structure().unwrap_err();
        assert!(err.contains("rational literal"), "got: {err}");

        // Row of the wrong length.
        let mut doc = document_from_exact(&imaginary_extension());
        doc.hodge_filtration[0].basis[0].push(Entry::Literal("0".into()));
        let err = doc.to_structure().unwrap_err();
        assert!(err.contains("dimension mismatch"), "got: {err}");
    }

    #[test]
    fn invalid_structures_are_rejected_with_the_library_diagnostic() {
        // A weight-0 line whose graded piece carries Hodge level 1: not pure.
        let doc = MhsDocument {
            field: FieldTag::GaussianRational,
            dim: 1,
            weight_filtration: vec![WeightStep {
                weight: 0,
                basis: vec![vec![Entry::Literal("1".into())]],
            }],
            hodge_filtration: vec![HodgeStep {
                level: 2,
                basis: vec![],
            }],
        tolerance: None,
        };
        let err = doc.to_structure().unwrap_err();
        assert!(err.contains("not pure"), "got: {err}");
    }
}
