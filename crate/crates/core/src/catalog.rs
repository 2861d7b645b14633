//! Closed-form leaf tables for types B and D at nonzero parameters, with
//! cross-checks against explicit group enumeration.
//!
//! Type B: `W_n = G(2,1,n)` with parameters `a` on the `s_i` and `b` on `t`;
//! when `b/a = m` is an integer in `[0, n-1]` the leaves are indexed by
//! `r >= 0` with `r(r+m) <= n`. Type D: `W'_n = G(2,2,n)`, leaves indexed by
//! `r != 1` with `r^2 <= n`.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{CycNum, Rat};
use crate::groups;
use crate::leaves;
use crate::linalg::{Matrix, Subspace, Vector};
use crate::refgroup::ReflectionGroup;
use crate::tau::TauContext;

pub const SOURCE: &str = "catalog";

/// `|W_n| = 2^n n!`.
pub fn order_b(n: u64) -> BigUint {
    let mut acc = BigUint::one() << n;
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// `b/a` avoids the integers `m` with `|m| <= n-1`.
pub fn smooth_b(n: u64, ratio: &Rat) -> bool {
    if !ratio.is_integer() {
        return true;
    }
    let m = ratio.to_integer().abs();
    m > (n as i64 - 1).max(0).into()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeafRecordB {
    pub source: &'static str,
    pub n: u64,
    pub m: u64,
    pub r: u64,
    /// `r(r+m)`, the rank of the cuspidal parabolic `W_{r(r+m)}`.
    pub parabolic_rank: u64,
    pub dim: u64,
    pub cuspidal_point: String,
    pub normalizer: String,
    pub normalizer_order: String,
    #[serde(rename = "conjB_model")]
    pub conj_b_model: String,
}

fn cuspidal_label(prefix: &str, rank: u64) -> String {
    if rank == 0 {
        "origin".into()
    } else {
        format!("{prefix}_{rank}")
    }
}

/// One record per `r >= 0` with `r(r+m) <= n`.
pub fn leaves_b(n: u64, m: u64) -> Vec<LeafRecordB> {
    (0..)
        .map(|r| (r, r * (r + m)))
        .take_while(|&(_, j)| j <= n)
        .map(|(r, j)| LeafRecordB {
            source: SOURCE,
            n,
            m,
            r,
            parabolic_rank: j,
            dim: 2 * (n - j),
            cuspidal_point: cuspidal_label("p", j),
            normalizer: format!("W_{}", n - j),
            normalizer_order: order_b(n - j).to_string(),
            conj_b_model: format!("Z_{{a,{}a}}({})", m + 2 * r, n - j),
        })
        .collect()
}

/// The cuspidal point of `W_n` itself exists iff `n = r(r+m)`.
pub fn has_cuspidal_b(n: u64, m: u64) -> bool {
    leaves_b(n, m).iter().any(|l| l.parabolic_rank == n)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeafRecordD {
    pub source: &'static str,
    pub n: u64,
    pub r: u64,
    pub parabolic_rank: u64,
    pub dim: u64,
    pub cuspidal_point: String,
    /// Matching leaves of the type-B quotient at `m = 0`.
    pub b_leaves: Vec<u64>,
    pub t_action: String,
    #[serde(rename = "conjB_model")]
    pub conj_b_model: String,
}

fn require_d_rank(n: u64) -> Result<()> {
    if n < 4 {
        return Err(Error::Invalid(format!("type D tables need n >= 4, got {n}")));
    }
    Ok(())
}

fn d_radii(n: u64) -> impl Iterator<Item = u64> {
    (0..).take_while(move |r| r * r <= n)
}

/// Records for `r = 0` and every `r >= 2` with `r^2 <= n`.
pub fn leaves_d(n: u64) -> Result<Vec<LeafRecordD>> {
    require_d_rank(n)?;
    Ok(d_radii(n)
        .filter(|&r| r != 1)
        .map(|r| {
            let j = r * r;
            let (b_leaves, t_action, model) = if r == 0 {
                (vec![0, 1], "free over S_0^0, trivial over S_1^0".to_string(), format!("Z'_a({n})"))
            } else {
                (vec![r], "trivial".to_string(), format!("Z_{{a,{}a}}({})", 2 * r, n - j))
            };
            LeafRecordD {
                source: SOURCE,
                n,
                r,
                parabolic_rank: j,
                dim: 2 * (n - j),
                cuspidal_point: cuspidal_label("p'", j),
                b_leaves,
                t_action,
                conj_b_model: model,
            }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TauLeafD {
    pub source: &'static str,
    pub n: u64,
    pub r: u64,
    /// Rank of `P_tau = W_{r^2 - 1}` inside `W_tau = W_{n-1}`.
    pub tau_parabolic_rank: u64,
    pub dim: u64,
    pub normalizer: String,
    pub normalizer_order: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DTauReport {
    pub source: &'static str,
    pub n: u64,
    pub quotient: String,
    pub fixed_locus: String,
    pub w_tau: String,
    pub leaves: Vec<LeafRecordD>,
    pub tau_leaves: Vec<TauLeafD>,
    /// Dimensions of `tau_leaves` agree with `2((n-1) - s)` for `s = r^2 - 1`.
    pub dims_match_w_tau_labels: bool,
}

/// The `tau = t` picture for type D: the quotient by `t`, which type-B leaves
/// each type-D leaf covers, and the leaves of the `t`-fixed locus.
pub fn leaves_d_tau_t(n: u64) -> Result<DTauReport> {
    let leaves = leaves_d(n)?;
    let tau_leaves: Vec<TauLeafD> = d_radii(n)
        .filter(|&r| r >= 1)
        .map(|r| TauLeafD {
            source: SOURCE,
            n,
            r,
            tau_parabolic_rank: r * r - 1,
            dim: 2 * (n - r * r),
            normalizer: format!("W_{}", n - r * r),
            normalizer_order: order_b(n - r * r).to_string(),
        })
        .collect();
    let mut via_labels: Vec<u64> = tau_leaves.iter().map(|l| 2 * ((n - 1) - l.tau_parabolic_rank)).collect();
    let mut dims: Vec<u64> = tau_leaves.iter().map(|l| l.dim).collect();
    via_labels.sort_unstable();
    dims.sort_unstable();
    Ok(DTauReport {
        source: SOURCE,
        n,
        quotient: format!("Z'_a({n})/<t> = Z_{{a,0}}({n})"),
        fixed_locus: "preimage of the closure of S_1^0".into(),
        w_tau: format!("W_{}", n - 1),
        leaves,
        tau_leaves,
        dims_match_w_tau_labels: dims == via_labels,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalizerCheck {
    pub r: u64,
    pub parabolic_rank: u64,
    pub claimed: String,
    pub claimed_order: String,
    pub computed_order: String,
    pub equal: bool,
}

/// `{x_1 = .. = x_j = 0}`.
fn coordinate_flat(n: usize, j: usize) -> Subspace {
    let covectors: Vec<Vector> = (0..j)
        .map(|i| (0..n).map(|c| if c == i { CycNum::one() } else { CycNum::zero() }).collect())
        .collect();
    Subspace::kernel_of(n, covectors)
}

/// `|N_W(P)/P|` for the pointwise stabilizer `P` of `{x_1 = .. = x_j = 0}`.
pub fn standard_normalizer_order(w: &ReflectionGroup, j: usize) -> usize {
    let p = w.pointwise_stabilizer(&coordinate_flat(w.dim(), j));
    w.normalizer(&p).quotient_order()
}

/// Compare the claimed `N(W_{r(r+m)}) / W_{r(r+m)} = W_{n - r(r+m)}` with
/// enumeration in `G(2,1,n)`.
pub fn cross_check_normalizers_b(n: u64, m: u64) -> Result<Vec<NormalizerCheck>> {
    let w = groups::gmpn(2, 1, n as usize)?;
    Ok(leaves_b(n, m)
        .into_iter()
        .map(|l| {
            let computed = standard_normalizer_order(&w, l.parabolic_rank as usize);
            let claimed = order_b(n - l.parabolic_rank);
            NormalizerCheck {
                r: l.r,
                parabolic_rank: l.parabolic_rank,
                claimed: l.normalizer,
                claimed_order: claimed.to_string(),
                computed_order: computed.to_string(),
                equal: BigUint::from(computed) == claimed,
            }
        })
        .collect())
}

/// For `G(2,2,n)`: identity case with `r >= 2` (`N(W'_{r^2})/W'_{r^2} = W_{n-r^2}`),
/// and the `tau = t` case for `r >= 1` (`N(W_{r^2-1})/W_{r^2-1}` inside `W_{n-1}`).
pub fn cross_check_normalizers_d(n: u64) -> Result<(Vec<NormalizerCheck>, Vec<NormalizerCheck>)> {
    require_d_rank(n)?;
    let w = Arc::new(groups::gmpn(2, 2, n as usize)?);
    let plain = d_radii(n)
        .filter(|&r| r >= 2)
        .map(|r| {
            let j = r * r;
            let computed = standard_normalizer_order(&w, j as usize);
            let claimed = order_b(n - j);
            NormalizerCheck {
                r,
                parabolic_rank: j,
                claimed: format!("W_{}", n - j),
                claimed_order: claimed.to_string(),
                computed_order: computed.to_string(),
                equal: BigUint::from(computed) == claimed,
            }
        })
        .collect();
    let t = groups::first_diag(n as usize, &CycNum::from_int(-1));
    let ctx = TauContext::build(w.clone(), t, crate::refgroup::default_cap())?;
    let mut twisted = Vec::new();
    for r in d_radii(n).filter(|&r| r >= 1) {
        let j = r * r;
        let x = w.flat_closure(&coordinate_flat(n as usize, j as usize));
        let sp = ctx
            .split_parabolic(&x)
            .ok_or_else(|| Error::Verification(format!("flat for r = {r} is not split by t")))?;
        let computed = ctx.normalizer_tau(&sp).order;
        let claimed = order_b(n - j);
        twisted.push(NormalizerCheck {
            r,
            parabolic_rank: j - 1,
            claimed: format!("W_{}", n - j),
            claimed_order: claimed.to_string(),
            computed_order: computed.to_string(),
            equal: BigUint::from(computed) == claimed,
        });
    }
    Ok((plain, twisted))
}

/// General-k leaves of type B coarsen the `k = 0` stratification: no more
/// leaves than parabolic classes, and every dimension occurs at `k = 0`.
pub fn degenerates_consistently(n: u64, m: u64) -> Result<bool> {
    let w = groups::gmpn(2, 1, n as usize)?;
    let strata = leaves::strata_double(&w);
    let dims: Vec<u64> = strata.iter().map(|s| s.dimension as u64).collect();
    let table = leaves_b(n, m);
    Ok(table.len() <= strata.len() && table.iter().all(|l| dims.contains(&l.dim)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothFixedPointsNote {
    pub source: &'static str,
    pub group: String,
    /// Order of the scalar `zeta` in `tau = zeta w`.
    pub d: u32,
    pub fixed_locus: String,
    pub leaves: String,
}

/// For `tau = zeta w` with `zeta` of order `d` and smooth `Z_k`, the fixed
/// locus equals the `mu_d`-fixed locus and its leaves are its components.
pub fn smooth_fixed_points_note(group: &str, zeta: &CycNum) -> Result<SmoothFixedPointsNote> {
    let d = zeta
        .root_order(10_000)
        .ok_or_else(|| Error::Invalid(format!("{zeta} is not a root of unity")))?;
    let fixed_locus = if d == 1 { "Z_k^tau = Z_k".to_string() } else { format!("Z_k^tau = Z_k^{{mu_{d}}}") };
    Ok(SmoothFixedPointsNote {
        source: SOURCE,
        group: group.to_string(),
        d,
        fixed_locus,
        leaves: "connected components of Z_k^tau".into(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DihedralRecord {
    pub source: &'static str,
    pub d: u32,
    pub tau: String,
    pub tau_squared_is_identity: bool,
    /// `tau s_0 tau^-1 = s_2` and `tau s_2 tau^-1 = s_0`.
    pub swaps_generators: bool,
    pub full: bool,
    pub w_tau_order: usize,
    /// Hyperplane orbits; equal parameters means the same `k` on all of them.
    pub orbits: usize,
    pub leaves_at_zero: Vec<usize>,
    pub statement: String,
}

/// Equal-parameter dihedral record for `W = <s_0, s_2>` and `tau = s_1`.
pub fn dihedral_record(d: u32) -> Result<DihedralRecord> {
    if d < 2 {
        return Err(Error::Invalid(format!("dihedral order parameter must be >= 2, got {d}")));
    }
    let w = Arc::new(groups::dihedral(d));
    let tau = groups::dihedral_reflection(d, 1);
    let s0 = groups::dihedral_reflection(d, 0);
    let s2 = groups::dihedral_reflection(d, 2);
    let tau_inv = tau.inverse().expect("reflection is invertible");
    let conj = |m: &Matrix| tau.mul(m).mul(&tau_inv);
    let swaps = conj(&s0) == s2 && conj(&s2) == s0;
    let ctx = TauContext::build(w.clone(), tau.clone(), crate::refgroup::default_cap())?;
    let leaves_at_zero = if ctx.is_full() {
        leaves::leaf_dims(&leaves::LeafAtlas::new(&ctx)?.leaves_zero_tau())
    } else {
        Vec::new()
    };
    Ok(DihedralRecord {
        source: SOURCE,
        d,
        tau: "s_1".into(),
        tau_squared_is_identity: tau.mul(&tau).is_identity(),
        swaps_generators: swaps,
        full: ctx.is_full(),
        w_tau_order: ctx.w_tau().order(),
        orbits: w.orbit_count(),
        leaves_at_zero,
        statement: "leaves of Z_k^tau match the conjectural parametrization at equal parameters".into(),
    })
}

/// Parse `b/a` given as `p/q` or an integer.
pub fn parse_ratio(s: &str) -> Result<Rat> {
    s.trim().parse::<Rat>().map_err(|_| Error::Parse(format!("bad ratio {s:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn dims_b(n: u64, m: u64) -> Vec<u64> {
        leaves_b(n, m).iter().map(|l| l.dim).collect()
    }

    #[test]
    fn smoothness() {
        assert!(!smooth_b(3, &rat(1, 1)));
        assert!(smooth_b(3, &rat(1, 2)));
        assert!(smooth_b(2, &rat(5, 1)));
        assert!(!smooth_b(3, &rat(-2, 1)));
        assert!(smooth_b(3, &rat(3, 1)));
    }

    #[test]
    fn type_b_tables() {
        assert_eq!(dims_b(4, 0), vec![8, 6, 0]);
        assert_eq!(dims_b(2, 1), vec![4, 0]);
        assert_eq!(dims_b(3, 3), vec![6]);
        assert!(has_cuspidal_b(2, 1));
        assert!(!has_cuspidal_b(3, 1));
        assert_eq!(leaves_b(4, 0)[1].conj_b_model, "Z_{a,2a}(3)");
    }

    #[test]
    fn type_d_tables() {
        let dims = |n| leaves_d(n).unwrap().iter().map(|l| l.dim).collect::<Vec<_>>();
        assert_eq!(dims(4), vec![8, 0]);
        assert_eq!(dims(5), vec![10, 2]);
        assert_eq!(dims(8), vec![16, 8]);
        assert!(leaves_d(3).is_err());
        let rep = leaves_d_tau_t(9).unwrap();
        assert_eq!(rep.tau_leaves.iter().map(|l| l.dim).collect::<Vec<_>>(), vec![16, 10, 0]);
        assert!(rep.dims_match_w_tau_labels);
    }

    #[test]
    fn order_formula() {
        assert_eq!(order_b(3), BigUint::from(48u32));
        assert_eq!(order_b(0), BigUint::from(1u32));
    }
}
