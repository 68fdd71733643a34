//! Decreasing filtrations stored by jump data, and the graded, bigraded and
//! trigraded dimension counts built from them.
//!
//! A decreasing filtration `F` of `V` is a chain `F^p ⊇ F^{p+1}` that is full
//! for `p ≪ 0` and zero for `p ≫ 0`. Only the *jumps* are stored: an ordered
//! map `level → Subspace` meaning "`F` takes this value from this level up to
//! the next stored level". Levels below the lowest stored jump are implied
//! full, and the chain reaches the zero subspace at the last stored jump, so
//! lookups at any integer are total.
//!
//! Increasing (weight) filtrations get their own type with the mirrored
//! convention and a lossless conversion `W_m ↦ W^{-m}` into a decreasing
//! avatar, which lets every multigraded computation speak one language.
//!
//! Quotient spaces are never materialized. The dimension of an induced
//! subspace on a graded piece `F₀^r/F₀^{r+1}` is always computed as
//! `dim((X ∩ F₀^r) + F₀^{r+1}) − dim F₀^{r+1}`, and intersections of induced
//! subspaces via the corresponding sum-then-intersect expression.

use std::collections::BTreeMap;
use std::fmt;

use crate::linalg::{Matrix, Subspace};
use crate::scalar::Scalar;

/// Errors from constructing filtrations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FiltrationError {
    #[error("subspace at level {level} has ambient dim {found}, expected {expected}")]
    AmbientMismatch { level: i64, expected: usize, found: usize },
    #[error("filtration is not decreasing: F^{upper} is not contained in F^{lower}")]
    NotDecreasing { lower: i64, upper: i64 },
    #[error("weight filtration is not increasing: W_{lower} is not contained in W_{upper}")]
    NotIncreasing { lower: i64, upper: i64 },
    #[error("weight filtration never reaches the full space (top stored weight {top})")]
    NotExhaustive { top: i64 },
}

/// A finite decreasing filtration of `K^ambient`, stored by jumps.
#[derive(Clone, Debug)]
pub struct Filtration<K> {
    ambient: usize,
    /// `jumps[p]` is the value of `F^p`; the value persists on `[p, next)`.
    /// Canonical form: values strictly decrease, the first stored value is a
    /// proper subspace (full space is implied below), and the last stored
    /// value is the zero subspace. For `ambient = 0` the map is empty.
    jumps: BTreeMap<i64, Subspace<K>>,
}

impl<K: Scalar> Filtration<K> {
    /// Build from any list of `(level, subspace)` samples. The samples are
    /// read as "`F^level` equals this subspace"; missing levels follow the
    /// persistence convention, values below the lowest sample are implied
    /// full, and values above the highest are implied zero.
    pub fn from_levels(
        ambient: usize,
        levels: Vec<(i64, Subspace<K>)>,
    ) -> Result<Self, FiltrationError> {
        let mut sorted = BTreeMap::new();
        for (p, s) in levels {
            if s.ambient_dim() != ambient {
                return Err(FiltrationError::AmbientMismatch {
                    level: p,
                    expected: ambient,
                    found: s.ambient_dim(),
                });
            }
            sorted.insert(p, s);
        }
        // Containment check on consecutive stored values.
        let keys: Vec<i64> = sorted.keys().copied().collect();
        for w in keys.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if !sorted[&lo].contains(&sorted[&hi]) {
                return Err(FiltrationError::NotDecreasing { lower: lo, upper: hi });
            }
        }
        if ambient > 0 {
            if let Some((&top, s)) = sorted.iter().next_back() {
                if !s.is_zero_space() {
                    sorted.insert(top + 1, Subspace::zero(ambient));
                }
            } else {
                // No samples: the trivial filtration.
                sorted.insert(1, Subspace::zero(ambient));
            }
        }
        let mut f = Filtration { ambient, jumps: sorted };
        f.canonicalize();
        Ok(f)
    }

    fn canonicalize(&mut self) {
        if self.ambient == 0 {
            self.jumps.clear();
            return;
        }
        // Drop entries equal to the previous stored value (or equal to the
        // implied full space when there is no previous entry).
        let mut rebuilt: BTreeMap<i64, Subspace<K>> = BTreeMap::new();
        for (p, s) in std::mem::take(&mut self.jumps) {
            let same_as_prev = match rebuilt.values().next_back() {
                Some(last) => *last == s,
                None => s.is_full(),
            };
            if !same_as_prev {
                rebuilt.insert(p, s);
            }
        }
        self.jumps = rebuilt;
    }

    /// The trivial filtration: full at level 0, zero at level 1.
    pub fn trivial(ambient: usize) -> Self {
        let mut jumps = BTreeMap::new();
        if ambient > 0 {
            jumps.insert(1, Subspace::zero(ambient));
        }
        Filtration { ambient, jumps }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// `F^p` for any integer `p`.
    pub fn value_at(&self, p: i64) -> Subspace<K> {
        if self.ambient == 0 {
            return Subspace::zero(0);
        }
        match self.jumps.range(..=p).next_back() {
            Some((_, s)) => s.clone(),
            None => Subspace::full(self.ambient),
        }
    }

    /// The stored jump levels in increasing order.
    pub fn jump_levels(&self) -> Vec<i64> {
        self.jumps.keys().copied().collect()
    }

    /// Smallest level at which the filtration is no longer the full space.
    /// (`None` for ambient 0, where all values coincide.)
    pub fn first_proper_level(&self) -> Option<i64> {
        self.jumps.keys().next().copied()
    }

    /// Smallest level at which the filtration is zero.
    pub fn zero_level(&self) -> Option<i64> {
        self.jumps.keys().next_back().copied()
    }

    /// Inclusive level range `[lo, hi]` such that every jump satisfies
    /// `lo ≤ level ≤ hi`, with `F^{lo−1}` full and `F^{hi}` zero. Returns
    /// `(1, 0)`-style degenerate bounds only for ambient 0.
    pub fn support_range(&self) -> (i64, i64) {
        match (self.first_proper_level(), self.zero_level()) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => (1, 0),
        }
    }

    /// Shift of indexing: `(shifted F)^p = F^{p−r}`. Shifting the trivial
    /// filtration by `r` yields the "level-1" filtration jumping to zero at
    /// `r + 1`.
    pub fn dec_shift(&self, r: i64) -> Self {
        Filtration {
            ambient: self.ambient,
            jumps: self.jumps.iter().map(|(p, s)| (p + r, s.clone())).collect(),
        }
    }

    /// Entrywise conjugation of every value.
    pub fn conjugate(&self) -> Self {
        Filtration {
            ambient: self.ambient,
            jumps: self.jumps.iter().map(|(p, s)| (*p, s.conjugate())).collect(),
        }
    }

    /// `dim Gr_F^p = dim F^p − dim F^{p+1}`.
    pub fn graded_dim(&self, p: i64) -> usize {
        self.value_at(p).dim() - self.value_at(p + 1).dim()
    }

    /// All nonzero graded dimensions as a map `p → dim Gr^p`.
    pub fn graded_dims(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        let (lo, hi) = self.support_range();
        for p in (lo - 1)..=hi {
            let d = self.graded_dim(p);
            if d > 0 {
                out.insert(p, d);
            }
        }
        out
    }

    /// Whether every stored value is fixed by conjugation.
    pub fn is_real(&self) -> bool {
        self.jumps.values().all(|s| s.conjugate() == *s)
    }

    /// Blockwise direct sum: `(F ⊕ F')^p = F^p ⊕ F'^p` in `K^{m+n}`.
    pub fn direct_sum(&self, other: &Filtration<K>) -> Filtration<K> {
        let ambient = self.ambient + other.ambient;
        let mut levels: Vec<i64> = self.jump_levels();
        levels.extend(other.jump_levels());
        levels.sort_unstable();
        levels.dedup();
        let samples = levels
            .into_iter()
            .map(|p| (p, self.value_at(p).direct_sum(&other.value_at(p))))
            .collect();
        Filtration::from_levels(ambient, samples)
            .expect("direct sums of nested chains stay nested")
    }

    /// Tensor-product filtration on `K^{m·n}` (Kronecker coordinates):
    /// `(F ⊗ F')^p = Σ_{a+b=p} F^a ⊗ F'^b`.
    ///
    /// Each factor takes only finitely many values, so the sum reduces to one
    /// term per constancy interval of `self`: if `F` has value `V` on an
    /// interval with exclusive upper end `ℓ`, the largest partner it pairs
    /// with is `F'^{p−ℓ+1}`.
    pub fn tensor(&self, other: &Filtration<K>) -> Filtration<K> {
        let ambient = self.ambient * other.ambient;
        if ambient == 0 {
            return Filtration::trivial(0);
        }
        // Constancy intervals of self as (exclusive upper end, value).
        let levels = self.jump_levels();
        let mut intervals = Vec::with_capacity(levels.len());
        for (j, &upper) in levels.iter().enumerate() {
            let value = if j == 0 {
                Subspace::full(self.ambient)
            } else {
                self.value_at(levels[j - 1])
            };
            intervals.push((upper, value));
        }
        let (lo_a, hi_a) = self.support_range();
        let (lo_b, hi_b) = other.support_range();
        let mut samples = Vec::new();
        for p in (lo_a + lo_b - 1)..=(hi_a + hi_b - 1) {
            let mut acc = Subspace::zero(ambient);
            for (upper, value) in &intervals {
                acc = acc.sum(&value.kron(&other.value_at(p - upper + 1)));
            }
            samples.push((p, acc));
        }
        Filtration::from_levels(ambient, samples)
            .expect("tensor filtration values are nested by construction")
    }

    /// Transport along an *invertible* square map (values keep their
    /// dimensions and strict nesting, so the jump structure is preserved).
    pub fn apply_map(&self, map: &Matrix<K>) -> Filtration<K> {
        assert_eq!(map.rows(), self.ambient, "basis change must be square");
        assert_eq!(map.cols(), self.ambient, "basis change must be square");
        Filtration {
            ambient: self.ambient,
            jumps: self.jumps.iter().map(|(p, s)| (*p, s.apply_map(map))).collect(),
        }
    }

    /// Dual filtration under the bilinear pairing, with level convention
    /// `F*^p = Ann(F^{offset − p})`.
    pub fn annihilator_dual(&self, offset: i64) -> Filtration<K> {
        if self.ambient == 0 {
            return Filtration::trivial(0);
        }
        let (lo, hi) = self.support_range();
        let samples = ((offset - hi)..=(offset - lo + 1))
            .map(|p| (p, self.value_at(offset - p).annihilator()))
            .collect();
        Filtration::from_levels(self.ambient, samples)
            .expect("annihilators of a nested chain are nested in reverse")
    }
}

impl<K: Scalar> PartialEq for Filtration<K> {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.jumps == other.jumps
    }
}

impl<K: Scalar> fmt::Display for Filtration<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.support_range();
        write!(f, "filtration on dim {}: ", self.ambient)?;
        let mut first = true;
        for p in (lo - 1)..=hi {
            if !first {
                write!(f, " ⊇ ")?;
            }
            write!(f, "F^{}({})", p, self.value_at(p).dim())?;
            first = false;
        }
        Ok(())
    }
}

/// A finite increasing (weight) filtration `W_m`, zero for `m ≪ 0` and full
/// for `m ≫ 0`, stored by jumps with the mirrored persistence convention.
#[derive(Clone, Debug)]
pub struct WeightFiltration<K> {
    ambient: usize,
    /// `jumps[m]` is the value of `W_m`; values strictly increase and the
    /// last stored value is the full space. Empty for ambient 0.
    jumps: BTreeMap<i64, Subspace<K>>,
}

impl<K: Scalar> PartialEq for WeightFiltration<K> {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.jumps == other.jumps
    }
}

impl<K: Scalar> WeightFiltration<K> {
    /// Build from `(weight, subspace)` samples; weights below the lowest
    /// sample are implied zero and weights above the highest are implied
    /// full.
    pub fn from_weights(
        ambient: usize,
        weights: Vec<(i64, Subspace<K>)>,
    ) -> Result<Self, FiltrationError> {
        let mut sorted = BTreeMap::new();
        for (m, s) in weights {
            if s.ambient_dim() != ambient {
                return Err(FiltrationError::AmbientMismatch {
                    level: m,
                    expected: ambient,
                    found: s.ambient_dim(),
                });
            }
            sorted.insert(m, s);
        }
        let keys: Vec<i64> = sorted.keys().copied().collect();
        for w in keys.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if !sorted[&hi].contains(&sorted[&lo]) {
                return Err(FiltrationError::NotIncreasing { lower: lo, upper: hi });
            }
        }
        if ambient > 0 {
            match sorted.iter().next_back() {
                Some((&top, s)) => {
                    if !s.is_full() {
                        sorted.insert(top + 1, Subspace::full(ambient));
                    }
                }
                None => {
                    sorted.insert(0, Subspace::full(ambient));
                }
            }
        }
        let mut out = WeightFiltration { ambient, jumps: BTreeMap::new() };
        for (m, s) in sorted {
            let same_as_prev = match out.jumps.values().next_back() {
                Some(last) => *last == s,
                None => s.is_zero_space(),
            };
            if !same_as_prev {
                out.jumps.insert(m, s);
            }
        }
        Ok(out)
    }

    /// Single-weight filtration: zero below `m`, full from `m` on.
    pub fn pure(ambient: usize, m: i64) -> Self {
        let mut jumps = BTreeMap::new();
        if ambient > 0 {
            jumps.insert(m, Subspace::full(ambient));
        }
        WeightFiltration { ambient, jumps }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// `W_m` for any integer `m`.
    pub fn value_at(&self, m: i64) -> Subspace<K> {
        if self.ambient == 0 {
            return Subspace::zero(0);
        }
        match self.jumps.range(..=m).next_back() {
            Some((_, s)) => s.clone(),
            None => Subspace::zero(self.ambient),
        }
    }

    pub fn jump_weights(&self) -> Vec<i64> {
        self.jumps.keys().copied().collect()
    }

    /// Inclusive weight range `[lo, hi]` with `W_{lo−1} = 0` and `W_hi` full.
    pub fn support_range(&self) -> (i64, i64) {
        let keys = self.jump_weights();
        match (keys.first(), keys.last()) {
            (Some(&lo), Some(&hi)) => (lo, hi),
            _ => (1, 0),
        }
    }

    /// `dim Gr^W_m = dim W_m − dim W_{m−1}`.
    pub fn graded_dim(&self, m: i64) -> usize {
        self.value_at(m).dim() - self.value_at(m - 1).dim()
    }

    pub fn graded_dims(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for &m in self.jumps.keys() {
            let d = self.graded_dim(m);
            if d > 0 {
                out.insert(m, d);
            }
        }
        out
    }

    /// Reindex as a decreasing filtration: `W^p = W_{−p}`.
    pub fn to_decreasing(&self) -> Filtration<K> {
        if self.ambient == 0 {
            return Filtration::trivial(0);
        }
        let entries: Vec<(&i64, &Subspace<K>)> = self.jumps.iter().collect();
        let mut jumps: BTreeMap<i64, Subspace<K>> = BTreeMap::new();
        // W is constant on [m_j, m_{j+1}) with value V_j, so the decreasing
        // avatar is constant with value V_j on [−m_{j+1}+1, −m_j]; the top
        // value (full) becomes the implied-full region and the region below
        // the lowest weight becomes the explicit zero jump.
        for j in 0..entries.len() {
            let (&m_j, v_j) = entries[j];
            if j + 1 < entries.len() {
                let (&m_next, _) = entries[j + 1];
                jumps.insert(-m_next + 1, v_j.clone());
            } else {
                debug_assert!(v_j.is_full(), "canonical weight filtration tops out at full");
            }
            let _ = m_j;
        }
        let (&m_lowest, _) = entries[0];
        jumps.insert(-m_lowest + 1, Subspace::zero(self.ambient));
        Filtration { ambient: self.ambient, jumps }
    }

    /// Shift of indexing: `(shifted W)_m = W_{m+r}` (used by Tate twists).
    pub fn shift_down(&self, r: i64) -> Self {
        WeightFiltration {
            ambient: self.ambient,
            jumps: self.jumps.iter().map(|(m, s)| (m - r, s.clone())).collect(),
        }
    }

    pub fn conjugate(&self) -> Self {
        WeightFiltration {
            ambient: self.ambient,
            jumps: self.jumps.iter().map(|(m, s)| (*m, s.conjugate())).collect(),
        }
    }

    /// Whether every stored value is fixed by conjugation.
    pub fn is_real(&self) -> bool {
        self.jumps.values().all(|s| s.conjugate() == *s)
    }

    /// Blockwise direct sum: `(W ⊕ W')_m = W_m ⊕ W'_m` in `K^{m+n}`.
    pub fn direct_sum(&self, other: &WeightFiltration<K>) -> WeightFiltration<K> {
        let ambient = self.ambient + other.ambient;
        let mut weights: Vec<i64> = self.jump_weights();
        weights.extend(other.jump_weights());
        weights.sort_unstable();
        weights.dedup();
        let samples = weights
            .into_iter()
            .map(|m| (m, self.value_at(m).direct_sum(&other.value_at(m))))
            .collect();
        WeightFiltration::from_weights(ambient, samples)
            .expect("direct sums of nested chains stay nested")
    }

    /// Tensor-product weight filtration: `(W ⊗ W')_n = Σ_{i+j=n} W_i ⊗ W'_j`.
    /// One term per stored jump `(m, U)` of `self` suffices: `U ⊗ W'_{n−m}`.
    pub fn tensor(&self, other: &WeightFiltration<K>) -> WeightFiltration<K> {
        let ambient = self.ambient * other.ambient;
        if ambient == 0 {
            return WeightFiltration::pure(0, 0);
        }
        let jumps: Vec<(i64, Subspace<K>)> =
            self.jumps.iter().map(|(m, s)| (*m, s.clone())).collect();
        let (lo_a, hi_a) = self.support_range();
        let (lo_b, hi_b) = other.support_range();
        let mut samples = Vec::new();
        for n in (lo_a + lo_b)..=(hi_a + hi_b) {
            let mut acc = Subspace::zero(ambient);
            for (m, u) in &jumps {
                acc = acc.sum(&u.kron(&other.value_at(n - m)));
            }
            samples.push((n, acc));
        }
        WeightFiltration::from_weights(ambient, samples)
            .expect("tensor weight values are nested by construction")
    }

    /// Transport along an invertible square map.
    pub fn apply_map(&self, map: &Matrix<K>) -> WeightFiltration<K> {
        assert_eq!(map.rows(), self.ambient, "basis change must be square");
        assert_eq!(map.cols(), self.ambient, "basis change must be square");
        WeightFiltration {
            ambient: self.ambient,
            jumps: self.jumps.iter().map(|(m, s)| (*m, s.apply_map(map))).collect(),
        }
    }

    /// Dual weight filtration under the bilinear pairing:
    /// `W*_m = Ann(W_{−m−1})`.
    pub fn annihilator_dual(&self) -> WeightFiltration<K> {
        if self.ambient == 0 {
            return WeightFiltration::pure(0, 0);
        }
        let (lo, hi) = self.support_range();
        let samples = ((-hi)..=(-lo))
            .map(|m| (m, self.value_at(-m - 1).annihilator()))
            .collect();
        WeightFiltration::from_weights(self.ambient, samples)
            .expect("annihilators of a nested chain are nested in reverse")
    }
}

/// Nonzero multigraded dimensions keyed by level tuples.
pub type GradedDims1 = BTreeMap<i64, usize>;
pub type GradedDims2 = BTreeMap<(i64, i64), usize>;
pub type GradedDims3 = BTreeMap<(i64, i64, i64), usize>;

/// `dim(F₁^p ∩ F₂^q)` — the double-filtration dimension function `f^{p,q}`.
pub fn intersection_dim<K: Scalar>(f1: &Filtration<K>, f2: &Filtration<K>, p: i64, q: i64) -> usize {
    f1.value_at(p).intersection_dim(&f2.value_at(q))
}

/// The distinct values of a filtration in decreasing order — the full space
/// followed by the stored jump values — together with a resolver from a
/// level to the index of its value. Shared plumbing for the graded-dimension
/// functions, which only ever need intersections of *distinct* values.
struct ValueTable<K: Scalar> {
    /// Stored jump levels, ascending.
    levels: Vec<i64>,
    /// `values[0]` is the full space; `values[i+1]` the value at `levels[i]`.
    values: Vec<Subspace<K>>,
}

impl<K: Scalar> ValueTable<K> {
    fn new(f: &Filtration<K>) -> Self {
        let levels = f.jump_levels();
        let mut values = Vec::with_capacity(levels.len() + 1);
        values.push(Subspace::full(f.ambient_dim()));
        for &l in &levels {
            values.push(f.value_at(l));
        }
        ValueTable { levels, values }
    }

    /// Index into `values` of the value at level `p`.
    fn index_at(&self, p: i64) -> usize {
        self.levels.partition_point(|&l| l <= p)
    }

    fn value(&self, i: usize) -> &Subspace<K> {
        &self.values[i]
    }
}

/// Adapted coordinates in which every value of a filtration is spanned by a
/// coordinate prefix: the adapted basis is assembled layer by layer from the
/// canonical bases of the nested values (rows whose pivot column is new to
/// the layer extend the previous layer's basis — nested canonical bases have
/// nested pivot sets, and the picked rows stay independent because an RREF
/// row has zeros at all other pivot columns of its own space). Intersections
/// with any filtration value then reduce to rank data of trailing column
/// blocks in the adapted coordinates.
struct PrefixModel<K: Scalar> {
    /// Row-coordinate converter: adapted coordinates of `v` are `v · minv`.
    minv: Matrix<K>,
    /// `prefix_dims[i]` = dimension of `values[i]` of the originating table
    /// (so `values[i]` is the span of the first `prefix_dims[i]` adapted
    /// coordinates).
    prefix_dims: Vec<usize>,
}

impl<K: Scalar> PrefixModel<K> {
    fn new(table: &ValueTable<K>, ambient: usize) -> Self {
        let mut rows: Vec<Vec<K>> = Vec::with_capacity(ambient);
        let mut covered_pivots = vec![false; ambient];
        // Smallest value first (table stores them descending).
        for v in table.values.iter().rev() {
            for (r, &pivot) in v.pivot_columns().iter().enumerate() {
                if !covered_pivots[pivot] {
                    covered_pivots[pivot] = true;
                    rows.push(v.basis().row_vec(r));
                }
            }
        }
        debug_assert_eq!(rows.len(), ambient, "values end at the full space");
        let m = Matrix::from_rows(rows);
        let minv = m.inverse().expect("adapted basis is invertible");
        let prefix_dims = table.values.iter().map(Subspace::dim).collect();
        PrefixModel { minv, prefix_dims }
    }

    /// A subspace's basis in adapted coordinates (rows; not re-reduced).
    fn transport(&self, s: &Subspace<K>) -> Matrix<K> {
        s.basis().mul(&self.minv)
    }
}

/// Bigraded dimensions of a pair of filtrations by inclusion–exclusion:
/// `t^{p,q} = f^{p,q} − f^{p+1,q} − f^{p,q+1} + f^{p+1,q+1}` where
/// `f^{p,q} = dim(F₁^p ∩ F₂^q)`. Entries sum to the ambient dimension.
pub fn double_graded_dims<K: Scalar>(f1: &Filtration<K>, f2: &Filtration<K>) -> GradedDims2 {
    assert_eq!(f1.ambient_dim(), f2.ambient_dim(), "ambient mismatch");
    let n = f1.ambient_dim();
    if n == 0 {
        return GradedDims2::new();
    }
    // Work in coordinates adapted to f1, where each of its values is a
    // coordinate prefix: one trailing-rank profile per distinct value of f2
    // then yields every lattice dimension
    // `dim(F₁ ∩ F₂) = dim F₂ − rank(columns beyond the prefix)`.
    let table1 = ValueTable::new(f1);
    let table2 = ValueTable::new(f2);
    let model = PrefixModel::new(&table1, n);
    let profiles: Vec<Vec<usize>> =
        table2.values.iter().map(|v| model.transport(v).trailing_rank_profile()).collect();
    let fdim = |p: i64, q: i64| -> i64 {
        let i = table1.index_at(p);
        let j = table2.index_at(q);
        let prefix = model.prefix_dims[i];
        (table2.value(j).dim() - profiles[j][prefix]) as i64
    };
    // t^{p,q} can only be nonzero where both filtrations actually jump
    // (`F₁^p ≠ F₁^{p+1}` requires `p+1` to be a stored level, and likewise
    // for `q`), so only those cells are evaluated.
    let mut out = GradedDims2::new();
    for &lp in &table1.levels {
        for &lq in &table2.levels {
            let (p, q) = (lp - 1, lq - 1);
            let t = fdim(p, q) - fdim(p + 1, q) - fdim(p, q + 1) + fdim(p + 1, q + 1);
            debug_assert!(t >= 0, "bigraded dimension must be nonnegative");
            if t > 0 {
                out.insert((p, q), t as usize);
            }
        }
    }
    out
}

/// Trigraded dimensions `δ_{p,q,r} = dim Gr_{F₂}^q Gr_{F₁}^p Gr_{F₀}^r V`.
///
/// For each level `r` of the innermost filtration `f0`, the filtrations
/// induced by `f1`, `f2` on `F₀^r / F₀^{r+1}` are handled without quotient
/// bases: the induced subspace for level `p` is represented by the ambient
/// space `(F₁^p ∩ F₀^r) + F₀^{r+1}`, intersections of induced subspaces by
/// the intersection of those representatives, and every quotient dimension
/// by subtracting `dim F₀^{r+1}`.
pub fn triple_graded_dims<K: Scalar>(
    f0: &Filtration<K>,
    f1: &Filtration<K>,
    f2: &Filtration<K>,
) -> GradedDims3 {
    assert_eq!(f0.ambient_dim(), f1.ambient_dim(), "ambient mismatch");
    assert_eq!(f0.ambient_dim(), f2.ambient_dim(), "ambient mismatch");
    let n = f0.ambient_dim();
    if n == 0 {
        return GradedDims3::new();
    }
    // Work in coordinates adapted to f0: each graded piece Gr_{f0}^r becomes
    // a coordinate block, the filtrations induced by f1, f2 on it are read
    // off by restricting (value ∩ prefix) to the block coordinates, and the
    // bigraded count on the block is delegated to `double_graded_dims`.
    let table0 = ValueTable::new(f0);
    let model = PrefixModel::new(&table0, n);
    let table1 = ValueTable::new(f1);
    let table2 = ValueTable::new(f2);
    let raw1: Vec<Matrix<K>> = table1.values.iter().map(|v| model.transport(v)).collect();
    let raw2: Vec<Matrix<K>> = table2.values.iter().map(|v| model.transport(v)).collect();
    // Basis rows of (value ∩ prefix_c), in adapted coordinates: combinations
    // of the rows killing the trailing block, via its left nullspace.
    let clipped = |raw: &Matrix<K>, c: usize| -> Matrix<K> {
        if c == n {
            return raw.clone();
        }
        let trailing = raw.column_block(c, n);
        let kernel = trailing.transpose().right_nullspace();
        kernel.mul(raw)
    };
    let mut out = GradedDims3::new();
    // Gr_{f0}^r is nonzero only when f0 jumps at r+1 (stored values are
    // strictly decreasing, so every stored level is a strict drop).
    for k0 in f0.jump_levels() {
        let r = k0 - 1;
        let idx = table0.index_at(k0);
        let c_hi = model.prefix_dims[idx - 1]; // dim of F₀^r
        let c_lo = model.prefix_dims[idx]; // dim of F₀^{r+1}
        let block_dim = c_hi - c_lo;
        // Induced filtration of each outer filtration on the block
        // coordinates c_lo..c_hi of Gr^r.
        let induced = |table: &ValueTable<K>, raws: &[Matrix<K>]| -> Filtration<K> {
            let samples: Vec<(i64, Subspace<K>)> = table
                .levels
                .iter()
                .map(|&level| {
                    let raw = &raws[table.index_at(level)];
                    let rows_in_prefix = clipped(raw, c_hi);
                    let block = rows_in_prefix.column_block(c_lo, c_hi);
                    (level, Subspace::from_matrix(block_dim, &block))
                })
                .collect();
            Filtration::from_levels(block_dim, samples)
                .expect("induced filtration values are nested")
        };
        let g1 = induced(&table1, &raw1);
        let g2 = induced(&table2, &raw2);
        for (&(p, q), &d) in &double_graded_dims(&g1, &g2) {
            out.insert((p, q, r), d);
        }
    }
    out
}

/// `dim(F₁^{p₁} ∩ … ∩ F_k^{p_k})` as a reusable closure over the level tuple.
pub fn multifilt_dim_fn<'a, K: Scalar>(
    filtrations: &'a [Filtration<K>],
) -> impl Fn(&[i64]) -> usize + 'a {
    move |levels: &[i64]| {
        assert_eq!(levels.len(), filtrations.len(), "level tuple arity mismatch");
        match filtrations.first() {
            None => 0,
            Some(first) => {
                let mut acc = first.value_at(levels[0]);
                for (f, &p) in filtrations.iter().zip(levels.iter()).skip(1) {
                    if acc.is_zero_space() {
                        break;
                    }
                    acc = acc.intersect(&f.value_at(p));
                }
                acc.dim()
            }
        }
    }
}

/// A bigrading `V = ⊕ V^{p,q}` compatible with two filtrations.
#[derive(Clone, Debug)]
pub struct Bigrading<K> {
    pub ambient: usize,
    pub pieces: BTreeMap<(i64, i64), Subspace<K>>,
}

impl<K: Scalar> Bigrading<K> {
    /// Reassemble `F₁^p = ⊕_{a ≥ p, b} V^{a,b}`.
    pub fn first_filtration_value(&self, p: i64) -> Subspace<K> {
        let mut acc = Subspace::zero(self.ambient);
        for (&(a, _), piece) in &self.pieces {
            if a >= p {
                acc = acc.sum(piece);
            }
        }
        acc
    }

    /// Reassemble `F₂^q = ⊕_{a, b ≥ q} V^{a,b}`.
    pub fn second_filtration_value(&self, q: i64) -> Subspace<K> {
        let mut acc = Subspace::zero(self.ambient);
        for (&(_, b), piece) in &self.pieces {
            if b >= q {
                acc = acc.sum(piece);
            }
        }
        acc
    }

    pub fn total_dim(&self) -> usize {
        self.pieces.values().map(Subspace::dim).sum()
    }
}

/// Split a space simultaneously under two filtrations: produce `V^{p,q}` with
/// `V = ⊕ V^{p,q}`, `F₁^p = ⊕_{a≥p} V^{a,·}`, `F₂^q = ⊕_{·,b≥q} V^{·,b}`, and
/// `dim V^{p,q}` equal to the bigraded dimension `t^{p,q}`.
///
/// The construction walks the lattice of intersections `F₁^k ∩ F₂^l` downward
/// from the top antidiagonal, completing bases: at each cell it extends a
/// basis of `(F₁^{p+1} ∩ F₂^q) + (F₁^p ∩ F₂^{q+1})` to one of `F₁^p ∩ F₂^q`
/// using that intersection's own canonical basis rows. Two-filtration cells
/// on one antidiagonal never interfere, so the cellwise choices assemble into
/// a genuine bigrading.
pub fn simultaneous_bigrading<K: Scalar>(f1: &Filtration<K>, f2: &Filtration<K>) -> Bigrading<K> {
    assert_eq!(f1.ambient_dim(), f2.ambient_dim(), "ambient mismatch");
    let ambient = f1.ambient_dim();
    let (p_lo, p_hi) = f1.support_range();
    let (q_lo, q_hi) = f2.support_range();
    let mut pieces = BTreeMap::new();
    if ambient == 0 {
        return Bigrading { ambient, pieces };
    }
    let mut cells = Vec::new();
    for p in (p_lo - 1)..=p_hi {
        for q in (q_lo - 1)..=q_hi {
            cells.push((p, q));
        }
    }
    // Downward walk: higher antidiagonals first (their pieces are already
    // chosen when a cell references (p+1, q) and (p, q+1)).
    cells.sort_by_key(|&(p, q)| (-(p + q), -p));
    for (p, q) in cells {
        let target = f1.value_at(p).intersect(&f2.value_at(q));
        if target.is_zero_space() {
            continue;
        }
        let above =
            f1.value_at(p + 1).intersect(&f2.value_at(q)).sum(&f1.value_at(p).intersect(&f2.value_at(q + 1)));
        if target.dim() == above.dim() {
            continue;
        }
        let mut span = above.clone();
        let mut rows = Vec::new();
        for r in 0..target.basis().rows() {
            let row = target.basis().row_vec(r);
            if !span.contains_row(&row) {
                span = span.sum(&Subspace::from_rows(ambient, vec![row.clone()]));
                rows.push(row);
            }
        }
        debug_assert_eq!(rows.len(), target.dim() - above.dim());
        pieces.insert((p, q), Subspace::from_rows(ambient, rows));
    }
    Bigrading { ambient, pieces }
}

/// Whether three filtrations are *opposed*: `δ_{p,q,r} = 0` unless
/// `p + q + r = 0`. For a weight avatar `f0 = W^{-•}` this is exactly purity
/// of `(F₁, F₂)` on every weight-graded piece.
pub fn are_opposed<K: Scalar>(f0: &Filtration<K>, f1: &Filtration<K>, f2: &Filtration<K>) -> bool {
    triple_graded_dims(f0, f1, f2).iter().all(|(&(p, q, r), &d)| d == 0 || p + q + r == 0)
}

/// Report from [`split_compatibility_check`]: the first multidegree at which
/// the lattice dimension differs from the trigraded sum, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitIncompatibility {
    /// Multidegree `(p, q, r)` = levels in `(f1, f2, f0)`.
    pub at: (i64, i64, i64),
    pub lattice_dim: usize,
    pub graded_sum: usize,
}

/// Necessary condition for the existence of a splitting compatible with all
/// three filtrations: for every multidegree, `dim(F₁^p ∩ F₂^q ∩ F₀^r)` must
/// equal the sum of `δ_{a,b,c}` over componentwise-larger multidegrees.
/// Returns the first violation, or `Ok` when the condition holds everywhere.
/// (The condition is necessary but not sufficient — three filtrations need
/// not admit a common splitting even when it holds.)
pub fn split_compatibility_check<K: Scalar>(
    f0: &Filtration<K>,
    f1: &Filtration<K>,
    f2: &Filtration<K>,
) -> Result<(), SplitIncompatibility> {
    let delta = triple_graded_dims(f0, f1, f2);
    let (r_lo, r_hi) = f0.support_range();
    let (p_lo, p_hi) = f1.support_range();
    let (q_lo, q_hi) = f2.support_range();
    for p in (p_lo - 1)..=p_hi {
        for q in (q_lo - 1)..=q_hi {
            for r in (r_lo - 1)..=r_hi {
                let lattice_dim = f1
                    .value_at(p)
                    .intersect(&f2.value_at(q))
                    .intersect(&f0.value_at(r))
                    .dim();
                let graded_sum: usize = delta
                    .iter()
                    .filter(|(&(a, b, c), _)| a >= p && b >= q && c >= r)
                    .map(|(_, &d)| d)
                    .sum();
                if lattice_dim != graded_sum {
                    return Err(SplitIncompatibility { at: (p, q, r), lattice_dim, graded_sum });
                }
            }
        }
    }
    Ok(())
}
