//! Closed-form Chern characters of the bundles attached to a tri-filtered
//! space.
//!
//! A vector space with three finite decreasing filtrations spreads out to an
//! equivariant bundle on the projective plane (filtrations attached to the
//! three coordinate axes) and to a second bundle on the plane blown up at the
//! three torus-fixed points. On the blow-up the tri-filtered space splits
//! into lines, so both Chern characters reduce to integer bookkeeping over
//! the trigraded dimensions `δ_{p,q,r}` and the bigraded dimensions
//! `t^{p,q}`:
//!
//! * a line with filtration shifts `(r, p, q)` contributes
//!   `1 + (r+p+q)·w² + ½(r+p+q)²·w⁴` on the plane and
//!   `1 + r·η₀ + p·η₁ + q·η₂ + ½(r² + 2rp + 2rq)·w̃⁴` on the blow-up;
//! * the difference between the plane bundle and the pushed-forward blow-up
//!   bundle is a sheaf supported on the exceptional locus whose only Chern
//!   contribution is `½ Σ t^{p,q} (p+q)² · w⁴`.
//!
//! Degree-4 coefficients are exact rationals with denominator dividing 2.

use num_rational::Rational64;

use crate::filtration::{
    are_opposed, double_graded_dims, triple_graded_dims, Filtration,
};
use crate::scalar::Scalar;

/// Chern data of a bundle on the projective plane: total rank, the `w²`
/// coefficient of `ch₁`, and the `w⁴` coefficient of `ch₂` (hyperplane-dual
/// generators of `H²` and `H⁴`).
///
/// All three fields are additive under direct sums of bundles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChernP2 {
    pub rank: usize,
    pub c1w2: i64,
    pub ch2w4: Rational64,
}

/// Chern data of a bundle on the plane blown up at the three torus-fixed
/// points: rank, the coefficients `(d0, d1, d2)` on the three exceptional
/// classes `η₀, η₁, η₂`, and the `w̃⁴` coefficient of `ch₂`.
///
/// All fields are additive under direct sums of bundles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChernBlowup {
    pub rank: usize,
    pub d0: i64,
    pub d1: i64,
    pub d2: i64,
    pub ch2w4: Rational64,
}

/// Non-opposed input where an opposed triple is required.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("filtrations are not opposed: trigraded dimension off the p+q+r=0 locus")]
pub struct NotOpposed;

/// Chern character of the line bundle on the plane attached to filtration
/// shifts `(r, p, q)`: rank 1, `ch₁ = (r+p+q)·w²`, `ch₂ = ½(r+p+q)²·w⁴`.
pub fn chern_line_p2(r: i64, p: i64, q: i64) -> ChernP2 {
    let s = r + p + q;
    ChernP2 { rank: 1, c1w2: s, ch2w4: Rational64::new(s * s, 2) }
}

/// Chern character of the corresponding line bundle on the blow-up: rank 1,
/// `ch₁ = r·η₀ + p·η₁ + q·η₂`, `ch₂ = ½(r² + 2rp + 2rq)·w̃⁴`.
pub fn chern_line_blowup(r: i64, p: i64, q: i64) -> ChernBlowup {
    ChernBlowup {
        rank: 1,
        d0: r,
        d1: p,
        d2: q,
        ch2w4: Rational64::new(r * r + 2 * r * p + 2 * r * q, 2),
    }
}

/// Chern character of the blow-up bundle of a tri-filtered space: the bundle
/// splits into lines indexed by the trigraded pieces, so the result is the
/// `δ_{p,q,r}`-weighted sum of [`chern_line_blowup`]`(r, p, q)`.
///
/// # Panics
/// If the filtrations have different ambient dimensions.
pub fn chern_rees_blowup<K: Scalar>(
    f0: &Filtration<K>,
    f1: &Filtration<K>,
    f2: &Filtration<K>,
) -> ChernBlowup {
    let mut out = ChernBlowup {
        rank: f0.ambient_dim(),
        d0: 0,
        d1: 0,
        d2: 0,
        ch2w4: Rational64::new(0, 1),
    };
    for (&(p, q, r), &mult) in &triple_graded_dims(f0, f1, f2) {
        let line = chern_line_blowup(r, p, q);
        let m = mult as i64;
        out.d0 += m * line.d0;
        out.d1 += m * line.d1;
        out.d2 += m * line.d2;
        out.ch2w4 += Rational64::from_integer(m) * line.ch2w4;
    }
    out
}

/// Chern character of the quotient sheaf comparing the plane bundle with the
/// pushed-forward blow-up bundle: rank 0, `ch₁ = 0`, and
/// `ch₂ = ½ Σ t^{p,q} (p+q)² · w⁴` over the bigraded dimensions of
/// `(f1, f2)`.
///
/// # Panics
/// If the filtrations have different ambient dimensions.
pub fn chern_quotient_sheaf<K: Scalar>(f1: &Filtration<K>, f2: &Filtration<K>) -> ChernP2 {
    let mut ch2 = Rational64::new(0, 1);
    for (&(p, q), &mult) in &double_graded_dims(f1, f2) {
        ch2 += Rational64::new((mult as i64) * (p + q) * (p + q), 2);
    }
    ChernP2 { rank: 0, c1w2: 0, ch2w4: ch2 }
}

/// Chern character of the plane bundle of a tri-filtered space:
/// rank = ambient dimension, `ch₁ = Σ δ_{p,q,r} (r+p+q) · w²`, and
/// `ch₂ = Σ δ_{p,q,r} ½(r² + 2rp + 2rq) + ½ Σ t^{p,q} (p+q)²` in `w⁴`.
///
/// Equivalently: the blow-up value plus the quotient-sheaf correction, which
/// is the exact-sequence additivity the structure comes from. It holds for
/// *every* input because `Σ_r δ_{p,q,r} = t^{p,q}` makes the `w²` terms and
/// the `½(p+q)²` corrections match line by line.
///
/// # Panics
/// If the filtrations have different ambient dimensions.
pub fn chern_rees_p2<K: Scalar>(
    f0: &Filtration<K>,
    f1: &Filtration<K>,
    f2: &Filtration<K>,
) -> ChernP2 {
    let blowup = chern_rees_blowup(f0, f1, f2);
    let mut c1 = 0_i64;
    for (&(p, q, r), &mult) in &triple_graded_dims(f0, f1, f2) {
        c1 += (mult as i64) * (r + p + q);
    }
    let correction = chern_quotient_sheaf(f1, f2);
    ChernP2 { rank: blowup.rank, c1w2: c1, ch2w4: blowup.ch2w4 + correction.ch2w4 }
}

/// Chern character of the plane bundle computed through the simplification
/// available when the three filtrations are opposed (all trigraded mass on
/// `p + q + r = 0`): rank = dimension, `ch₁ = 0`, and
/// `ch₂ = ½ Σ_{p,q} [t^{p,q} − δ_{p,q,−p−q}] (p+q)² · w⁴`.
///
/// Returns [`NotOpposed`] when the precondition fails. On opposed inputs the
/// value agrees with [`chern_rees_p2`].
pub fn chern_rees_p2_opposed<K: Scalar>(
    f0: &Filtration<K>,
    f1: &Filtration<K>,
    f2: &Filtration<K>,
) -> Result<ChernP2, NotOpposed> {
    if !are_opposed(f0, f1, f2) {
        return Err(NotOpposed);
    }
    let delta = triple_graded_dims(f0, f1, f2);
    let t = double_graded_dims(f1, f2);
    // Union of bigraded supports: t entries and diagonal δ entries.
    let mut keys: Vec<(i64, i64)> = t.keys().copied().collect();
    keys.extend(delta.keys().map(|&(p, q, _)| (p, q)));
    keys.sort_unstable();
    keys.dedup();
    let mut ch2 = Rational64::new(0, 1);
    for (p, q) in keys {
        let t_pq = t.get(&(p, q)).copied().unwrap_or(0) as i64;
        let h_pq = delta.get(&(p, q, -p - q)).copied().unwrap_or(0) as i64;
        ch2 += Rational64::new((t_pq - h_pq) * (p + q) * (p + q), 2);
    }
    Ok(ChernP2 { rank: f0.ambient_dim(), c1w2: 0, ch2w4: ch2 })
}
