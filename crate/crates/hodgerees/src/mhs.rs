//! Mixed Hodge structures over a fixed real basis.
//!
//! A structure on `K^n` is a pair: an increasing weight filtration `W_•`
//! whose values are conjugation-stable (real) subspaces, and a decreasing
//! Hodge filtration `F^•` with arbitrary complex values. Conjugation is
//! coordinatewise in the fixed ambient basis, so realness is exact.
//!
//! A pair is *valid* when, on every weight-graded piece `Gr^W_n`, the
//! filtrations induced by `F` and `F̄` are opposed — each graded piece
//! carries a pure structure of its own weight. Validity is enforced at
//! construction: every [`MixedHodgeStructure`] value satisfies it.
//!
//! The central invariant is the splitting level
//!
//! ```text
//! α(H) = ½ Σ_{p,q} (p+q)² (h^{p,q} − t^{p,q})
//! ```
//!
//! where `h^{p,q}` are the Hodge numbers read off the weight-graded pieces
//! and `t^{p,q}` the bigraded dimensions of the pair `(F, F̄)` on the whole
//! space. It is a nonnegative integer, vanishes exactly when the structure is
//! split over the reals (its Deligne splitting is conjugation-symmetric), and
//! is computable as minus the degree-4 Chern coefficient of the associated
//! plane bundle ([`crate::rees::chern_rees_p2`]).

use std::collections::BTreeMap;

use crate::filtration::{
    double_graded_dims, triple_graded_dims, Filtration, GradedDims2, WeightFiltration,
};
use crate::linalg::{Matrix, Subspace};
use crate::scalar::Scalar;

/// Why a weight/Hodge pair fails to be a mixed Hodge structure.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MhsError {
    #[error("weight filtration ambient dim {weight} does not match hodge ambient dim {hodge}")]
    AmbientMismatch { weight: usize, hodge: usize },
    #[error("weight filtration not real: W_{weight} is not conjugation-stable")]
    WeightNotReal { weight: i64 },
    #[error(
        "graded piece of weight {weight} is not pure: induced Hodge dimension at \
         (p, q) = ({p}, {q}) with p + q ≠ {weight}"
    )]
    NotPure { weight: i64, p: i64, q: i64 },
}

/// Errors from building an extension.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtensionError {
    #[error("theta must be a {rows}×{cols} matrix (target ambient × source ambient)")]
    ThetaShape { rows: usize, cols: usize },
    #[error("theta is not weight-compatible: image of W_{weight} leaves the target W_{weight}")]
    ThetaNotWeightCompatible { weight: i64 },
}

/// The three dimension tables of a structure.
///
/// `h` are the Hodge numbers of the weight-graded pieces (nonzero entries
/// only); `t` the bigraded dimensions of `(F, F̄)` on the whole space
/// (nonzero entries only); `f` the lattice dimensions `dim(F^p ∩ F̄^q)`
/// stored on the closed window `[p_lo−1, p_hi] × [q_lo−1, q_hi]` spanned by
/// the two supports — outside the window `f` continues monotonically
/// (ambient dimension toward `−∞`, zero toward `+∞`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeNumbers {
    pub h: GradedDims2,
    pub t: GradedDims2,
    pub f: BTreeMap<(i64, i64), usize>,
}

impl HodgeNumbers {
    pub fn h_at(&self, p: i64, q: i64) -> usize {
        self.h.get(&(p, q)).copied().unwrap_or(0)
    }

    pub fn t_at(&self, p: i64, q: i64) -> usize {
        self.t.get(&(p, q)).copied().unwrap_or(0)
    }
}

/// The canonical bigrading `I^{p,q}` of a structure (nonzero pieces only).
#[derive(Debug, Clone)]
pub struct DeligneSplitting<K> {
    pub ambient: usize,
    pub pieces: BTreeMap<(i64, i64), Subspace<K>>,
}

impl<K: Scalar> DeligneSplitting<K> {
    pub fn piece(&self, p: i64, q: i64) -> Subspace<K> {
        self.pieces.get(&(p, q)).cloned().unwrap_or_else(|| Subspace::zero(self.ambient))
    }

    /// Whether `I^{p,q} = conj(I^{q,p})` for all `(p, q)`.
    pub fn is_conjugation_symmetric(&self) -> bool {
        self.pieces.iter().all(|(&(p, q), piece)| *piece == self.piece(q, p).conjugate())
    }
}

/// The datum of an extension of `B` by `A` in normal form: a linear map
/// `θ : B → A` (matrix with `dim A` rows and `dim B` columns) that respects
/// the weight filtrations, `θ(W_m B) ⊆ W_m A`.
#[derive(Debug, Clone)]
pub struct ExtensionData<K> {
    pub theta: Matrix<K>,
}

/// A validated mixed Hodge structure.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedHodgeStructure<K: Scalar> {
    weight: WeightFiltration<K>,
    hodge: Filtration<K>,
}

impl<K: Scalar> MixedHodgeStructure<K> {
    /// Validate and wrap a weight/Hodge pair.
    pub fn new(
        weight: WeightFiltration<K>,
        hodge: Filtration<K>,
    ) -> Result<Self, MhsError> {
        Self::validate(&weight, &hodge)?;
        Ok(MixedHodgeStructure { weight, hodge })
    }

    /// Check the two structure invariants: realness of every weight value,
    /// and purity of every weight-graded piece (the induced `(F, F̄)` pair is
    /// opposed on `Gr^W_n` for each `n`). The reported error carries the
    /// first failure.
    pub fn validate(
        weight: &WeightFiltration<K>,
        hodge: &Filtration<K>,
    ) -> Result<(), MhsError> {
        if weight.ambient_dim() != hodge.ambient_dim() {
            return Err(MhsError::AmbientMismatch {
                weight: weight.ambient_dim(),
                hodge: hodge.ambient_dim(),
            });
        }
        for m in weight.jump_weights() {
            let value = weight.value_at(m);
            if value.conjugate() != value {
                return Err(MhsError::WeightNotReal { weight: m });
            }
        }
        let avatar = weight.to_decreasing();
        let conj = hodge.conjugate();
        for (&(p, q, r), &d) in &triple_graded_dims(&avatar, hodge, &conj) {
            if d > 0 && p + q + r != 0 {
                // Avatar level r corresponds to weight −r.
                return Err(MhsError::NotPure { weight: -r, p, q });
            }
        }
        Ok(())
    }

    /// Internal constructor for results of operations that preserve
    /// validity by construction (twists, duals, sums, tensors, extensions,
    /// basis changes). Validity of derived structures is exercised
    /// separately by the property suite, which re-validates random
    /// instances explicitly; repeating the full purity check here would
    /// dominate the cost of every operation.
    fn new_unchecked(weight: WeightFiltration<K>, hodge: Filtration<K>) -> Self {
        MixedHodgeStructure { weight, hodge }
    }

    /// The rank-1 structure `T⟨k⟩` of type `(−k, −k)`: pure of weight `−2k`.
    pub fn tate(k: i64) -> Self {
        MixedHodgeStructure {
            weight: WeightFiltration::pure(1, -2 * k),
            hodge: Filtration::trivial(1).dec_shift(-k),
        }
    }

    /// The zero structure on the 0-dimensional space (unit for direct sums).
    pub fn zero() -> Self {
        MixedHodgeStructure {
            weight: WeightFiltration::pure(0, 0),
            hodge: Filtration::trivial(0),
        }
    }

    /// Transport along an invertible *real* basis change (the matrix must be
    /// fixed by entrywise conjugation, so that weight values stay real).
    /// Produces an isomorphic structure: all dimension tables and α agree.
    pub fn apply_basis_change(&self, map: &Matrix<K>) -> Self {
        assert_eq!(map.conj(), *map, "basis change must be real");
        MixedHodgeStructure::new_unchecked(
            self.weight.apply_map(map),
            self.hodge.apply_map(map),
        )
    }

    pub fn ambient_dim(&self) -> usize {
        self.hodge.ambient_dim()
    }

    pub fn weight(&self) -> &WeightFiltration<K> {
        &self.weight
    }

    pub fn hodge(&self) -> &Filtration<K> {
        &self.hodge
    }

    /// The weight filtration reindexed as a decreasing filtration
    /// (`W^p = W_{−p}`), the form the trigraded machinery consumes.
    pub fn weight_avatar(&self) -> Filtration<K> {
        self.weight.to_decreasing()
    }

    /// The conjugate Hodge filtration `F̄`.
    pub fn conj_hodge(&self) -> Filtration<K> {
        self.hodge.conjugate()
    }

    /// `f^{p,q} = dim(F^p ∩ F̄^q)` for arbitrary `(p, q)`.
    pub fn f_dim(&self, p: i64, q: i64) -> usize {
        self.hodge.value_at(p).intersect(&self.conj_hodge().value_at(q)).dim()
    }

    /// The `h`, `t` and `f` dimension tables.
    pub fn hodge_numbers(&self) -> HodgeNumbers {
        let conj = self.conj_hodge();
        let avatar = self.weight_avatar();
        let mut h = GradedDims2::new();
        for (&(p, q, r), &d) in &triple_graded_dims(&avatar, &self.hodge, &conj) {
            if d > 0 {
                debug_assert_eq!(p + q + r, 0, "validated structures are pure on Gr^W");
                h.insert((p, q), d);
            }
        }
        let t = double_graded_dims(&self.hodge, &conj);
        let (p_lo, p_hi) = self.hodge.support_range();
        let (q_lo, q_hi) = conj.support_range();
        let mut f = BTreeMap::new();
        for p in (p_lo - 1)..=p_hi {
            for q in (q_lo - 1)..=q_hi {
                f.insert((p, q), self.f_dim(p, q));
            }
        }
        HodgeNumbers { h, t, f }
    }

    /// The canonical splitting
    /// `I^{p,q} = (F^p ∩ W_{p+q}) ∩ (F̄^q ∩ W_{p+q} + Σ_{i≥1} F̄^{q−i} ∩ W_{p+q−i−1})`,
    /// evaluated literally with subspace algebra; the sum truncates once the
    /// weight filtration reaches zero. Pieces are computed for every `(p, q)`
    /// with `h^{p,q} > 0`, and satisfy:
    ///
    /// 1. `I^{p,q} ⊆ conj(I^{q,p}) + W_{p+q−2}`;
    /// 2. `W_m = ⊕_{p+q≤m} I^{p,q}`;
    /// 3. `F^p = ⊕_{i≥p, q} I^{i,q}`;
    /// 4. `dim I^{p,q} = h^{p,q}`.
    pub fn deligne_splitting(&self) -> DeligneSplitting<K> {
        let ambient = self.ambient_dim();
        let conj = self.conj_hodge();
        // The support of h: on a valid structure each (p, q) occurs at the
        // single grade r = −(p+q), so the trigraded table projects cleanly.
        let trigraded = triple_graded_dims(&self.weight_avatar(), &self.hodge, &conj);
        let (w_lo, _) = self.weight.support_range();
        let mut pieces = BTreeMap::new();
        for &(p, q, _) in trigraded.keys() {
            let m = p + q;
            let w_m = self.weight.value_at(m);
            let left = self.hodge.value_at(p).intersect(&w_m);
            let mut right = conj.value_at(q).intersect(&w_m);
            let mut i = 1;
            while m - i > w_lo {
                right = right.sum(&conj.value_at(q - i).intersect(&self.weight.value_at(m - i - 1)));
                i += 1;
            }
            pieces.insert((p, q), left.intersect(&right));
        }
        DeligneSplitting { ambient, pieces }
    }

    /// Whether the canonical splitting is conjugation-symmetric,
    /// `I^{p,q} = conj(I^{q,p})` for all `(p, q)` — equivalently `α = 0`.
    pub fn is_r_split(&self) -> bool {
        self.deligne_splitting().is_conjugation_symmetric()
    }

    /// The splitting level `α = ½ Σ (p+q)² (h^{p,q} − t^{p,q})`: a
    /// nonnegative integer, zero exactly for conjugation-split structures.
    /// Works from the `h` and `t` tables directly (the `f` window of
    /// [`Self::hodge_numbers`] is not needed here).
    pub fn alpha(&self) -> i64 {
        let conj = self.conj_hodge();
        let avatar = self.weight_avatar();
        let mut twice = 0_i64;
        for (&(p, q, _), &d) in &triple_graded_dims(&avatar, &self.hodge, &conj) {
            twice += (p + q) * (p + q) * d as i64;
        }
        for (&(p, q), &d) in &double_graded_dims(&self.hodge, &conj) {
            twice -= (p + q) * (p + q) * d as i64;
        }
        debug_assert!(twice % 2 == 0, "2α must be even");
        debug_assert!(twice >= 0, "α must be nonnegative");
        twice / 2
    }

    /// Twist by `T⟨k⟩`: `F^p ↦ F^{p+k}`, `W_n ↦ W_{n+2k}`. Leaves α (and the
    /// whole isomorphism type up to relabeling) unchanged.
    pub fn tate_twist(&self, k: i64) -> Self {
        MixedHodgeStructure::new_unchecked(
            self.weight.shift_down(2 * k),
            self.hodge.dec_shift(-k),
        )
    }

    /// The dual structure on the dual basis (bilinear pairing):
    /// `F^p(H*) = Ann(F^{1−p} H)` and `W_m(H*) = Ann(W_{−m−1} H)`.
    /// Dimension tables negate their indices: `h^{p,q}_{H*} = h^{−p,−q}_H`
    /// and likewise for `t`, so `α(H*) = α(H)`.
    pub fn dual(&self) -> Self {
        MixedHodgeStructure::new_unchecked(
            self.weight.annihilator_dual(),
            self.hodge.annihilator_dual(1),
        )
    }

    /// Block direct sum; `h` and `t` tables add componentwise, so α adds.
    pub fn direct_sum(&self, other: &Self) -> Self {
        MixedHodgeStructure::new_unchecked(
            self.weight.direct_sum(&other.weight),
            self.hodge.direct_sum(&other.hodge),
        )
    }

    /// Tensor product on Kronecker coordinates:
    /// `W_n = Σ_{a+b=n} W_a ⊗ W_b`, `F^p = Σ_{a+b=p} F^a ⊗ F^b`;
    /// `α(H ⊗ H') = dim H' · α(H) + dim H · α(H')`.
    pub fn tensor(&self, other: &Self) -> Self {
        MixedHodgeStructure::new_unchecked(
            self.weight.tensor(&other.weight),
            self.hodge.tensor(&other.hodge),
        )
    }

    /// Build the extension of `b` by `a` classified by `ext`: on the ambient
    /// space `A ⊕ B`,
    ///
    /// * `W_m(H) = W_m(A) ⊕ W_m(B)`,
    /// * `F^p(H) = {(x + θ(y), y) : x ∈ F^p(A), y ∈ F^p(B)}`.
    ///
    /// The result is always a valid structure, the embedding of `A` and the
    /// projection to `B` are strict (`A ∩ F^p_H = F^p_A` and
    /// `π(F^p_H) = F^p_B`), and the `h`-tables add componentwise. With
    /// `θ = 0` this is exactly [`Self::direct_sum`].
    pub fn extension_build(
        a: &Self,
        b: &Self,
        ext: &ExtensionData<K>,
    ) -> Result<Self, ExtensionError> {
        let (na, nb) = (a.ambient_dim(), b.ambient_dim());
        if ext.theta.rows() != na || ext.theta.cols() != nb {
            return Err(ExtensionError::ThetaShape { rows: na, cols: nb });
        }
        // Weight compatibility: θ(W_m B) ⊆ W_m A at every jump of B.
        for m in b.weight.jump_weights() {
            let image = b.weight.value_at(m).apply_map(&ext.theta);
            if !a.weight.value_at(m).contains(&image) {
                return Err(ExtensionError::ThetaNotWeightCompatible { weight: m });
            }
        }
        let weight = a.weight.direct_sum(&b.weight);
        // Graph construction for each jump level of either Hodge filtration.
        let mut levels = a.hodge.jump_levels();
        levels.extend(b.hodge.jump_levels());
        levels.sort_unstable();
        levels.dedup();
        let ambient = na + nb;
        let mut samples = Vec::new();
        for p in levels {
            let fa = a.hodge.value_at(p);
            let fb = b.hodge.value_at(p);
            let mut rows = Vec::with_capacity(fa.dim() + fb.dim());
            for r in 0..fa.basis().rows() {
                let mut row = fa.basis().row_vec(r);
                row.extend(std::iter::repeat_n(K::zero(), nb));
                rows.push(row);
            }
            if !fb.is_zero_space() {
                let shifted = fb.basis().mul(&ext.theta.transpose());
                for r in 0..fb.basis().rows() {
                    let mut row = shifted.row_vec(r);
                    row.extend(fb.basis().row_vec(r));
                    rows.push(row);
                }
            }
            samples.push((p, Subspace::from_rows(ambient, rows)));
        }
        let hodge = Filtration::from_levels(ambient, samples)
            .expect("graph filtration is nested level by level");
        Ok(MixedHodgeStructure::new_unchecked(weight, hodge))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rees::chern_rees_p2;
    use crate::scalar::GaussianRational;

    type Qi = GaussianRational;
    type Mhs = MixedHodgeStructure<Qi>;

    fn q(n: i64) -> Qi {
        Qi::from_ratio(n, 1)
    }

    fn qi() -> Qi {
        Qi::i()
    }

    fn line(ambient: usize, coords: Vec<Qi>) -> Subspace<Qi> {
        Subspace::from_rows(ambient, vec![coords])
    }

    /// The 2-dimensional extension of `T⟨−1⟩` by `T⟨0⟩` with parameter `c`:
    /// `W₀ = span(e₁)`, `W₂` full, `F¹ = span(e₂ + c·e₁)`.
    fn h_c(c: Qi) -> Mhs {
        let weight = WeightFiltration::from_weights(
            2,
            vec![(0, line(2, vec![q(1), q(0)])), (2, Subspace::full(2))],
        )
        .unwrap();
        let hodge = Filtration::from_levels(2, vec![(1, line(2, vec![c, q(1)]))]).unwrap();
        Mhs::new(weight, hodge).unwrap()
    }

    #[test]
    fn tate_structures() {
        for k in -2..=2 {
            let t = Mhs::tate(k);
            let numbers = t.hodge_numbers();
            assert_eq!(numbers.h_at(-k, -k), 1, "T⟨{k}⟩ has type (−k, −k)");
            assert_eq!(numbers.t_at(-k, -k), 1);
            assert_eq!(t.alpha(), 0);
            assert!(t.is_r_split());
        }
    }

    #[test]
    fn validation_rejects_complex_weight_basis() {
        let weight = WeightFiltration::from_weights(
            2,
            vec![(0, line(2, vec![qi(), q(1)])), (2, Subspace::full(2))],
        )
        .unwrap();
        let hodge = Filtration::trivial(2);
        assert_eq!(
            Mhs::new(weight, hodge).unwrap_err(),
            MhsError::WeightNotReal { weight: 0 }
        );
    }

    #[test]
    fn validation_rejects_impure_graded_piece() {
        // Weight 0 but Hodge filtration concentrated at level 1: the graded
        // piece would have type (1,1) ≠ weight 0.
        let weight = WeightFiltration::pure(1, 0);
        let hodge = Filtration::trivial(1).dec_shift(1);
        match Mhs::new(weight, hodge).unwrap_err() {
            MhsError::NotPure { weight: m, .. } => assert_eq!(m, 0),
            other => panic!("expected NotPure, got {other:?}"),
        }
    }

    #[test]
    fn h_c_dimension_tables() {
        let h_i = h_c(qi());
        let n = h_i.hodge_numbers();
        assert_eq!(n.h_at(0, 0), 1);
        assert_eq!(n.h_at(1, 1), 1);
        assert_eq!(n.t_at(1, 0), 1);
        assert_eq!(n.t_at(0, 1), 1);
        assert_eq!(n.t_at(1, 1), 0);
        assert_eq!(n.t_at(0, 0), 0);

        let h_0 = h_c(q(0));
        let n0 = h_0.hodge_numbers();
        assert_eq!(n0.h_at(0, 0), 1);
        assert_eq!(n0.h_at(1, 1), 1);
        assert_eq!(n0.t_at(1, 1), 1);
        assert_eq!(n0.t_at(0, 0), 1);
        assert_eq!(n0.t_at(1, 0), 0);
    }

    #[test]
    fn h_c_deligne_splitting() {
        let h_i = h_c(qi());
        let s = h_i.deligne_splitting();
        assert_eq!(s.piece(1, 1), line(2, vec![qi(), q(1)]), "I^{{1,1}} = span(e₂ + i e₁)");
        assert_eq!(s.piece(0, 0), line(2, vec![q(1), q(0)]), "I^{{0,0}} = span(e₁)");
        assert!(!h_i.is_r_split());

        let h_0 = h_c(q(0));
        let s0 = h_0.deligne_splitting();
        assert_eq!(s0.piece(1, 1), line(2, vec![q(0), q(1)]));
        assert_eq!(s0.piece(0, 0), line(2, vec![q(1), q(0)]));
        assert_eq!(s0.piece(1, 1).conjugate(), s0.piece(1, 1));
        assert!(h_0.is_r_split());
    }

    #[test]
    fn deligne_lemma_clauses_on_h_i() {
        let h_i = h_c(qi());
        let s = h_i.deligne_splitting();
        let numbers = h_i.hodge_numbers();
        // (iv) dims match h.
        for (&(p, q_), piece) in &s.pieces {
            assert_eq!(piece.dim(), numbers.h_at(p, q_));
        }
        // (ii) W_m = ⊕_{p+q≤m} I^{p,q}.
        for m in -1..=3 {
            let mut acc = Subspace::zero(2);
            let mut dim_sum = 0;
            for (&(p, q_), piece) in &s.pieces {
                if p + q_ <= m {
                    acc = acc.sum(piece);
                    dim_sum += piece.dim();
                }
            }
            assert_eq!(acc, h_i.weight().value_at(m), "W_{m}");
            assert_eq!(acc.dim(), dim_sum, "independence at m = {m}");
        }
        // (iii) F^p = ⊕_{i≥p} I^{i,q}.
        for p in -1..=2 {
            let mut acc = Subspace::zero(2);
            for (&(a, _), piece) in &s.pieces {
                if a >= p {
                    acc = acc.sum(piece);
                }
            }
            assert_eq!(acc, h_i.hodge().value_at(p), "F^{p}");
        }
        // (i) I^{p,q} ⊆ conj(I^{q,p}) + W_{p+q−2}.
        for (&(p, q_), piece) in &s.pieces {
            let bound = s.piece(q_, p).conjugate().sum(&h_i.weight().value_at(p + q_ - 2));
            assert!(bound.contains(piece), "clause (i) at ({p},{q_})");
        }
    }

    #[test]
    fn alpha_values() {
        assert_eq!(h_c(qi()).alpha(), 1);
        assert_eq!(h_c(q(0)).alpha(), 0);
        assert_eq!(h_c(q(7)).alpha(), 0, "real parameter splits");
        let h_i = h_c(qi());
        assert_eq!(h_i.direct_sum(&h_i).alpha(), 2);
    }

    #[test]
    fn alpha_matches_chern_character() {
        for h in [h_c(qi()), h_c(q(0)), Mhs::tate(1), h_c(qi()).direct_sum(&h_c(q(0)))] {
            let chern = chern_rees_p2(&h.weight_avatar(), h.hodge(), &h.conj_hodge());
            assert_eq!(chern.c1w2, 0);
            assert_eq!(-chern.ch2w4, num_rational::Rational64::from_integer(h.alpha()));
            assert_eq!(chern.rank, h.ambient_dim());
        }
    }

    #[test]
    fn tate_twist_reindexes() {
        let h_i = h_c(qi());
        assert_eq!(h_i.tate_twist(0), h_i);
        assert_eq!(h_i.tate_twist(1).tate_twist(2), h_i.tate_twist(3));
        assert_eq!(Mhs::tate(0).tate_twist(3), Mhs::tate(3));
        for k in -2..=2 {
            assert_eq!(h_i.tate_twist(k).alpha(), 1, "α invariant under twist by {k}");
        }
        // Type shift: h^{p,q} of the twist is h^{p+k,q+k} of the original.
        let twisted = h_i.tate_twist(2).hodge_numbers();
        assert_eq!(twisted.h_at(-1, -1), 1);
        assert_eq!(twisted.h_at(-2, -2), 1);
    }

    #[test]
    fn dual_structure() {
        assert_eq!(Mhs::tate(2).dual(), Mhs::tate(-2));
        let h_i = h_c(qi());
        let dual = h_i.dual();
        let n = h_i.hodge_numbers();
        let nd = dual.hodge_numbers();
        for p in -2..=2 {
            for q_ in -2..=2 {
                assert_eq!(nd.h_at(p, q_), n.h_at(-p, -q_), "h at ({p},{q_})");
                assert_eq!(nd.t_at(p, q_), n.t_at(-p, -q_), "t at ({p},{q_})");
            }
        }
        assert_eq!(dual.alpha(), 1);
        // Biduality at the level of dimension tables.
        let ndd = dual.dual().hodge_numbers();
        assert_eq!(ndd.h, n.h);
        assert_eq!(ndd.t, n.t);
    }

    #[test]
    fn direct_sum_tables_add() {
        let a = Mhs::tate(0);
        let b = Mhs::tate(-1);
        let s = a.direct_sum(&b);
        let n = s.hodge_numbers();
        assert_eq!(n.h_at(0, 0), 1);
        assert_eq!(n.h_at(1, 1), 1);
        assert_eq!(s.alpha(), 0);

        assert_eq!(h_c(qi()).direct_sum(&h_c(q(0))).alpha(), 1);
    }

    #[test]
    fn tensor_products() {
        let h_i = h_c(qi());
        // Unit: ⊗ T⟨0⟩ preserves the tables.
        let unit = h_i.tensor(&Mhs::tate(0));
        let n = h_i.hodge_numbers();
        let nu = unit.hodge_numbers();
        assert_eq!(nu.h, n.h);
        assert_eq!(nu.t, n.t);
        // Twisting is tensoring with a Tate object.
        for k in [-1, 0, 2] {
            assert_eq!(h_i.tensor(&Mhs::tate(k)).alpha(), 1);
            assert_eq!(h_i.tensor(&Mhs::tate(k)), h_i.tate_twist(k));
        }
        // α(H ⊗ H') = dim H'·α(H) + dim H·α(H').
        assert_eq!(h_i.tensor(&h_i).alpha(), 4);
    }

    #[test]
    fn extension_reproduces_h_c() {
        let a = Mhs::tate(0);
        let b = Mhs::tate(-1);
        for c in [q(0), qi(), q(3)] {
            let ext = ExtensionData { theta: Matrix::from_rows(vec![vec![c.clone()]]) };
            let h = Mhs::extension_build(&a, &b, &ext).unwrap();
            assert_eq!(h, h_c(c.clone()), "extension with θ = {c}");
        }
        // θ = 0 is the direct sum.
        let zero = ExtensionData { theta: Matrix::zeros(1, 1) };
        assert_eq!(
            Mhs::extension_build(&a, &b, &zero).unwrap(),
            a.direct_sum(&b)
        );
    }

    #[test]
    fn extension_strictness_and_h_additivity() {
        let a = h_c(qi());
        let b = Mhs::tate(-1);
        let theta = Matrix::from_rows(vec![vec![q(1)], vec![qi()]]);
        let h = Mhs::extension_build(&a, &b, &ExtensionData { theta }).unwrap();

        let a_block = Subspace::from_rows(3, vec![
            vec![q(1), q(0), q(0)],
            vec![q(0), q(1), q(0)],
        ]);
        let proj = Matrix::from_rows(vec![vec![q(0), q(0), q(1)]]);
        for p in -1..=3 {
            // A ∩ F^p_H = F^p_A (embedded in the first block).
            let fa = a.hodge().value_at(p);
            let embedded = fa.direct_sum(&Subspace::zero(1));
            assert_eq!(h.hodge().value_at(p).intersect(&a_block), embedded, "strict at {p}");
            // π(F^p_H) = F^p_B.
            assert_eq!(h.hodge().value_at(p).apply_map(&proj), b.hodge().value_at(p));
        }
        // h-tables add.
        let (na, nb, nh) = (a.hodge_numbers(), b.hodge_numbers(), h.hodge_numbers());
        for p in -2..=3 {
            for q_ in -2..=3 {
                assert_eq!(
                    nh.h_at(p, q_),
                    na.h_at(p, q_) + nb.h_at(p, q_),
                    "h at ({p},{q_})"
                );
            }
        }
        // Super-additivity of α.
        assert!(h.alpha() >= a.alpha() + b.alpha());
    }

    #[test]
    fn extension_rejects_bad_theta() {
        let a = Mhs::tate(0);
        let b = Mhs::tate(-1);
        let wrong_shape = ExtensionData { theta: Matrix::<Qi>::zeros(2, 1) };
        assert_eq!(
            Mhs::extension_build(&a, &b, &wrong_shape).unwrap_err(),
            ExtensionError::ThetaShape { rows: 1, cols: 1 }
        );
        // θ from B (weight 2) into A (weight 0) must kill W₂(B)... a nonzero
        // scalar maps W₂(B) = B into A = W₀(A) ⊆ W₂(A), which IS allowed;
        // incompatibility needs the weights the other way round.
        let a_high = Mhs::tate(-1); // weight 2
        let b_low = Mhs::tate(0); // weight 0
        let ext = ExtensionData { theta: Matrix::from_rows(vec![vec![q(1)]]) };
        assert_eq!(
            Mhs::extension_build(&a_high, &b_low, &ext).unwrap_err(),
            ExtensionError::ThetaNotWeightCompatible { weight: 0 }
        );
    }

    #[test]
    fn f_numbers_and_window() {
        let h_i = h_c(qi());
        let n = h_i.hodge_numbers();
        assert_eq!(n.f.get(&(1, 1)), Some(&0));
        assert_eq!(n.f.get(&(1, 0)), Some(&1));
        assert_eq!(n.f.get(&(0, 1)), Some(&1));
        assert_eq!(n.f.get(&(0, 0)), Some(&2));
        assert_eq!(h_i.f_dim(-5, -5), 2);
        assert_eq!(h_i.f_dim(2, 0), 0);
        // Inclusion–exclusion on f reproduces t.
        for p in -1..=1 {
            for q_ in -1..=1 {
                let t = h_i.f_dim(p, q_) as i64 - h_i.f_dim(p + 1, q_) as i64
                    - h_i.f_dim(p, q_ + 1) as i64
                    + h_i.f_dim(p + 1, q_ + 1) as i64;
                assert_eq!(t, n.t_at(p, q_) as i64, "t at ({p},{q_})");
            }
        }
    }
}
