//! Deterministic random generators for property testing: exact structures
//! built as extension towers of pure blocks, weight-compatible extension
//! data, random subspaces, and the block-lift instances for the rank bounds
//! of [`crate::verify::check_rank_lemma`].
//!
//! Everything here takes an explicit RNG, so any seeded generator gives
//! reproducible instances.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::filtration::{Filtration, WeightFiltration};
use crate::linalg::{Matrix, Subspace};
use crate::mhs::{ExtensionData, MixedHodgeStructure};
use crate::scalar::{GaussianRational, Scalar};

type Qi = GaussianRational;
type Mhs = MixedHodgeStructure<Qi>;

/// A random Gaussian rational with numerators bounded by `bound` and small
/// denominators, skewed toward real and zero values so generated structures
/// cover split and non-split cases. Small entries keep exact arithmetic on
/// derived structures (tensors, towers) fast without losing coverage.
pub fn random_gauss<R: Rng>(rng: &mut R, bound: i64) -> Qi {
    let part = |rng: &mut R| -> (i64, i64) {
        (rng.gen_range(-bound..=bound), rng.gen_range(1..=bound.min(3)))
    };
    match rng.gen_range(0..10) {
        0..=1 => Qi::from_ratio(0, 1),
        2..=4 => {
            let (n, d) = part(rng);
            Qi::from_ratio(n, d)
        }
        5..=6 => {
            let (n, d) = part(rng);
            Qi::from_parts(0, 1, n, d)
        }
        _ => {
            let (rn, rd) = part(rng);
            let (im_n, im_d) = part(rng);
            Qi::from_parts(rn, rd, im_n, im_d)
        }
    }
}

/// A uniformly random `dim`-dimensional subspace of `Q(i)^ambient` with small
/// integer generators (entries in `[-3, 3]`).
pub fn random_subspace<R: Rng>(rng: &mut R, ambient: usize, dim: usize) -> Subspace<Qi> {
    assert!(dim <= ambient, "subspace dim exceeds ambient");
    if dim == 0 {
        return Subspace::zero(ambient);
    }
    loop {
        let rows: Vec<Vec<Qi>> = (0..dim)
            .map(|_| (0..ambient).map(|_| Qi::from_ratio(rng.gen_range(-3..=3), 1)).collect())
            .collect();
        let s = Subspace::from_rows(ambient, rows);
        if s.dim() == dim {
            return s;
        }
    }
}

/// A random invertible `n × n` matrix with small integer entries.
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> Matrix<Qi> {
    if n == 0 {
        return Matrix::zeros(0, 0);
    }
    loop {
        let m = Matrix::from_rows(
            (0..n)
                .map(|_| (0..n).map(|_| Qi::from_ratio(rng.gen_range(-2..=2), 1)).collect())
                .collect(),
        );
        if m.inverse().is_some() {
            return m;
        }
    }
}

/// A pure structure of the given weight: a direct sum of one or two blocks,
/// each either one-dimensional of type `(p, p)` (even weight only) or
/// two-dimensional of type `(p, q) + (q, p)` with a randomly tilted Hodge
/// line. Total dimension is capped by `max_dim ≥ 1`.
pub fn random_pure<R: Rng>(rng: &mut R, weight: i64, max_dim: usize) -> Mhs {
    assert!(max_dim >= 1);
    let even = weight % 2 == 0;
    let mut blocks: Vec<Mhs> = Vec::new();
    let mut budget = max_dim;
    let target_blocks = if rng.gen_bool(0.3) { 2 } else { 1 };
    while blocks.len() < target_blocks && budget > 0 {
        let one_dim = even && (budget == 1 || rng.gen_bool(0.5));
        if one_dim {
            blocks.push(Mhs::tate(-weight / 2));
            budget -= 1;
        } else if budget >= 2 {
            blocks.push(pure_two_dim_block(rng, weight));
            budget -= 2;
        } else {
            break; // odd weight with a 1-dim budget left: stop
        }
    }
    if blocks.is_empty() {
        // Odd weight with max_dim == 1 cannot happen through the public
        // samplers (they reserve 2 dims for odd weights), but stay total.
        blocks.push(pure_two_dim_block(rng, weight));
    }
    let mut iter = blocks.into_iter();
    let first = iter.next().expect("at least one block");
    iter.fold(first, |acc, b| acc.direct_sum(&b))
}

/// A two-dimensional pure block of weight `w` and type `(p, q) + (q, p)`,
/// `p > q`, `p + q = w`: the Hodge line is `span(u + i·v)` for a random real
/// basis `(u, v)`, so its conjugate is an independent complement.
fn pure_two_dim_block<R: Rng>(rng: &mut R, weight: i64) -> Mhs {
    let gap = if weight % 2 == 0 { 2 } else { 1 } + if rng.gen_bool(0.2) { 2 } else { 0 };
    let p = (weight + gap) / 2;
    let q = weight - p;
    let real_basis = random_invertible(rng, 2);
    let line_row: Vec<Qi> = (0..2)
        .map(|c| real_basis[(0, c)].clone() + Qi::i() * real_basis[(1, c)].clone())
        .collect();
    let hodge = Filtration::from_levels(
        2,
        vec![
            (q + 1, Subspace::from_rows(2, vec![line_row])),
            (p + 1, Subspace::zero(2)),
        ],
    )
    .expect("line chain is nested");
    Mhs::new(WeightFiltration::pure(2, weight), hodge).expect("pure block is valid")
}

/// Tuning knobs for [`random_mhs`].
#[derive(Clone, Copy, Debug)]
pub struct SampleOptions {
    /// Maximum number of distinct weights (the weight length), ≥ 1.
    pub max_weights: usize,
    /// Hard cap on the total dimension, ≥ 2.
    pub max_total_dim: usize,
    /// Inclusive range the weights are drawn from.
    pub weight_range: (i64, i64),
    /// Whether to finish with a random real change of basis (hides the
    /// block-diagonal shape without changing any invariant).
    pub basis_change: bool,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions {
            max_weights: 4,
            max_total_dim: 8,
            weight_range: (-3, 3),
            basis_change: true,
        }
    }
}

/// A random valid structure: an extension tower of pure blocks over
/// increasing weights (each step extends by the strictly higher weight, so
/// any extension datum is weight-compatible), optionally transported through
/// a random real basis change.
pub fn random_mhs<R: Rng>(rng: &mut R, opts: &SampleOptions) -> Mhs {
    assert!(opts.max_weights >= 1 && opts.max_total_dim >= 2);
    let (lo, hi) = opts.weight_range;
    let mut candidates: Vec<i64> = (lo..=hi).collect();
    candidates.shuffle(rng);
    let count = rng.gen_range(1..=opts.max_weights.min(candidates.len()));
    let mut weights: Vec<i64> = candidates.into_iter().take(count).collect();
    weights.sort_unstable();

    let mut tower: Option<Mhs> = None;
    let mut remaining = opts.max_total_dim;
    for (idx, &m) in weights.iter().enumerate() {
        // Reserve two dimensions for each odd weight still to come.
        let reserve: usize = weights[idx + 1..]
            .iter()
            .map(|w| if w % 2 == 0 { 1 } else { 2 })
            .sum();
        let this_need = if m % 2 == 0 { 1 } else { 2 };
        if remaining < this_need + reserve {
            continue;
        }
        let budget = (remaining - reserve).min(4).max(this_need);
        let pure = random_pure(rng, m, budget);
        remaining -= pure.ambient_dim();
        tower = Some(match tower {
            None => pure,
            Some(acc) => {
                let theta = random_matrix(rng, acc.ambient_dim(), pure.ambient_dim());
                Mhs::extension_build(&acc, &pure, &ExtensionData { theta })
                    .expect("extension by a strictly higher weight accepts any theta")
            }
        });
    }
    let mut h = tower.expect("at least one weight fits the dimension budget");
    if opts.basis_change && rng.gen_bool(0.5) {
        h = h.apply_basis_change(&random_invertible(rng, h.ambient_dim()));
    }
    h
}

fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Matrix<Qi> {
    Matrix::from_rows(
        (0..rows).map(|_| (0..cols).map(|_| random_gauss(rng, 3)).collect()).collect(),
    )
}

/// A random extension datum `θ : B → A` compatible with the weight
/// filtrations (`θ(W_m B) ⊆ W_m A` for every `m`), valid for *arbitrary*
/// pairs: a weight-adapted basis of `B` is sent to random combinations of
/// basis vectors of the matching weight level of `A`.
pub fn random_compatible_theta<R: Rng>(rng: &mut R, a: &Mhs, b: &Mhs) -> Matrix<Qi> {
    let (na, nb) = (a.ambient_dim(), b.ambient_dim());
    if na == 0 || nb == 0 {
        return Matrix::zeros(na, nb);
    }
    // Weight-adapted basis of B: walk the jumps upward, completing the basis
    // with each level's canonical rows; record the weight each vector enters.
    let mut adapted: Vec<Vec<Qi>> = Vec::with_capacity(nb);
    let mut entry_weights: Vec<i64> = Vec::with_capacity(nb);
    let mut span = Subspace::zero(nb);
    for m in b.weight().jump_weights() {
        let w_m = b.weight().value_at(m);
        for r in 0..w_m.basis().rows() {
            let row = w_m.basis().row_vec(r);
            if !span.contains_row(&row) {
                span = span.sum(&Subspace::from_rows(nb, vec![row.clone()]));
                adapted.push(row);
                entry_weights.push(m);
            }
        }
    }
    debug_assert_eq!(adapted.len(), nb, "weight filtration tops out at the full space");
    // Image of each adapted vector: a random combination inside W_m(A).
    let mut images: Vec<Vec<Qi>> = Vec::with_capacity(nb);
    for &m in &entry_weights {
        let w_m = a.weight().value_at(m);
        let mut row = vec![Qi::zero(); na];
        for r in 0..w_m.basis().rows() {
            let coeff = random_gauss(rng, 3);
            if coeff.is_zero() {
                continue;
            }
            for (slot, entry) in row.iter_mut().zip(w_m.basis().row(r)) {
                *slot = slot.clone() + coeff.clone() * entry.clone();
            }
        }
        images.push(row);
    }
    // θ maps adapted row v_j to image u_j: as row actions, θᵀ = V⁻¹ U.
    let v = Matrix::from_rows(adapted);
    let u = Matrix::from_rows(images);
    let v_inv = v.inverse().expect("adapted basis is invertible");
    v_inv.mul(&u).transpose()
}

/// A random `(A, B, θ)` triple ready for
/// [`MixedHodgeStructure::extension_build`], with `dim A + dim B ≤ 8`.
pub fn random_extension_triple<R: Rng>(rng: &mut R) -> (Mhs, Mhs, ExtensionData<Qi>) {
    let small = SampleOptions {
        max_weights: 2,
        max_total_dim: 4,
        weight_range: (-2, 2),
        basis_change: true,
    };
    let a = random_mhs(rng, &small);
    let b = random_mhs(rng, &small);
    let theta = random_compatible_theta(rng, &a, &b);
    (a, b, ExtensionData { theta })
}

/// One instance of the block-lift rank bounds: subspace pairs in `V₁` and
/// `V₂`, and two lifts in `V₁ ⊕ V₂` that restrict/project to them.
#[derive(Clone, Debug)]
pub struct RankLemmaInstance {
    pub dim_v1: usize,
    pub dim_v2: usize,
    pub w1: Subspace<Qi>,
    pub w1_prime: Subspace<Qi>,
    pub w2: Subspace<Qi>,
    pub w2_prime: Subspace<Qi>,
    /// Lift with `W ∩ V₁ = W₁` and projection `W₂`.
    pub w: Subspace<Qi>,
    /// Lift with `W′ ∩ V₁ = W₁′` and projection `W₂′`.
    pub w_prime: Subspace<Qi>,
}

/// Build a lift `W ⊆ V₁ ⊕ V₂` with `W ∩ V₁ = W₁` and projection `W₂`:
/// rows `(x | 0)` for a basis of `W₁` plus rows `(φ(y) | y)` for a basis of
/// `W₂` and an arbitrary linear `φ : W₂ → V₁`.
fn random_lift<R: Rng>(
    rng: &mut R,
    dim_v1: usize,
    w1: &Subspace<Qi>,
    w2: &Subspace<Qi>,
) -> Subspace<Qi> {
    let ambient = dim_v1 + w2.ambient_dim();
    let mut rows = Vec::with_capacity(w1.dim() + w2.dim());
    for r in 0..w1.basis().rows() {
        let mut row = w1.basis().row_vec(r);
        row.extend(std::iter::repeat_n(Qi::zero(), w2.ambient_dim()));
        rows.push(row);
    }
    for r in 0..w2.basis().rows() {
        let mut row: Vec<Qi> =
            (0..dim_v1).map(|_| Qi::from_ratio(rng.gen_range(-3..=3), 1)).collect();
        row.extend(w2.basis().row_vec(r));
        rows.push(row);
    }
    Subspace::from_rows(ambient, rows)
}

/// A random rank-bounds instance with `dim V₁ + dim V₂ ≤ 6`.
pub fn random_rank_lemma_instance<R: Rng>(rng: &mut R) -> RankLemmaInstance {
    let dim_v1 = rng.gen_range(1..=3);
    let dim_v2 = rng.gen_range(1..=3);
    let sub = |rng: &mut R, ambient: usize| {
        let d = rng.gen_range(0..=ambient);
        random_subspace(rng, ambient, d)
    };
    let w1 = sub(rng, dim_v1);
    let w1_prime = sub(rng, dim_v1);
    let w2 = sub(rng, dim_v2);
    let w2_prime = sub(rng, dim_v2);
    let w = random_lift(rng, dim_v1, &w1, &w2);
    let w_prime = random_lift(rng, dim_v1, &w1_prime, &w2_prime);
    RankLemmaInstance { dim_v1, dim_v2, w1, w1_prime, w2, w2_prime, w, w_prime }
}
