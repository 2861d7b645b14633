//! Invariant suites. Each check has a stable id and a pass flag; the CLI
//! `--verify` flag and the test suites run them.

use std::collections::HashSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cherednik::{rank1_center_relation, CherElement, CherMonomial, Cherednik, Coeff, Mode};
use crate::error::Result;
use crate::exactnum::{rat, CycNum};
use crate::groups;
use crate::leaves::{self, LeafAtlas};
use crate::refgroup::{ParameterK, ReflectionGroup};
use crate::tau::TauContext;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    pub fn new(id: &str, pass: bool) -> Self {
        Check { id: id.into(), pass, detail: String::new() }
    }

    pub fn with_detail(id: &str, pass: bool, detail: impl Into<String>) -> Self {
        Check { id: id.into(), pass, detail: detail.into() }
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}

// ---- reflection groups ----

pub fn group_checks(w: &ReflectionGroup) -> Vec<Check> {
    let mut out = vec![Check::new("refgroup.generated-by-reflections", w.is_generated_by_reflections())];
    let by_hyp: usize = w.hyperplanes().iter().map(|h| h.e - 1).sum();
    out.push(Check::with_detail(
        "refgroup.reflections-per-hyperplane",
        by_hyp == w.reflections().len(),
        format!("{} reflections, {} hyperplanes", w.reflections().len(), w.hyperplanes().len()),
    ));
    let classes = w.parabolic_classes();
    let witnesses = classes.iter().all(|c| w.stabilizer(&c.rep.witness).elements == c.rep.elements);
    out.push(Check::new("refgroup.parabolic-witness", witnesses));
    let normalizers = classes.iter().all(|c| {
        let n = w.normalizer(&c.rep);
        let size = n.quotient_order() * c.rep.order();
        size == n.elements.len() && w.order().is_multiple_of(size)
    });
    out.push(Check::new("refgroup.normalizer-cosets", normalizers));
    let flats = w.flats();
    let limit = flats.len().min(24);
    let steinberg = (0..limit).all(|i| {
        (i + 1..limit).all(|j| {
            let meet = flats[i].intersect(&flats[j]);
            let p: HashSet<usize> = w.pointwise_stabilizer(&meet).elements.into_iter().collect();
            w.pointwise_stabilizer(&flats[i]).elements.iter().all(|e| p.contains(e))
                && w.pointwise_stabilizer(&flats[j]).elements.iter().all(|e| p.contains(e))
        })
    });
    out.push(Check::new("refgroup.steinberg", steinberg));
    out
}

// ---- automorphisms and leaves ----

pub fn tau_checks(ctx: &TauContext) -> Result<Vec<Check>> {
    let mut out = vec![Check::new("tau.full", ctx.is_full())];
    out.push(Check::new("tau.w-tau-reflection-group", ctx.w_tau().is_generated_by_reflections()));
    out.push(Check::new("tau.hyperplane-traces", ctx.hyperplane_traces_match()));
    out.push(Check::new("tau.orbit-coincidence", ctx.orbit_coincidence(&ctx.sample_points())));
    out.push(Check::new("tau.acts-trivially-on-w-tau", ctx.tau_acts_trivially_on_w_tau()));
    let classes = ctx.group().parabolic_classes();
    out.push(Check::new(
        "tau.class-split-consistency",
        classes.iter().all(|c| ctx.class_split_consistent(&c.flats)),
    ));
    if !ctx.is_full() {
        return Ok(out);
    }
    let splits = ctx.split_parabolics()?;
    let sub = ctx.w_tau().all_parabolics().len();
    out.push(Check::with_detail(
        "tau.split-count",
        splits.len() == sub,
        format!("{} split parabolics, {} parabolics of W_tau", splits.len(), sub),
    ));
    out.push(Check::new("tau.vptau", splits.iter().all(|s| ctx.vptau_holds(s))));
    out.push(Check::new(
        "tau.normalizer-image",
        splits.iter().all(|s| {
            let n = ctx.normalizer_tau(s);
            n.injective && n.image_is_tau_fixed()
        }),
    ));
    out.push(Check::new("tau.intersections-split", ctx.intersections_split(&splits, 40)));
    Ok(out)
}

pub fn leaf_checks(ctx: &TauContext) -> Result<Vec<Check>> {
    let w = ctx.group();
    let single = leaves::strata_single(w);
    let double = leaves::strata_double(w);
    let strata_ok = single.len() == double.len()
        && single.iter().zip(&double).all(|(a, b)| 2 * a.dimension == b.dimension);
    let mut out = vec![Check::new("leaves.strata-single-double", strata_ok)];
    if !ctx.is_full() {
        return Ok(out);
    }
    let atlas = LeafAtlas::new(ctx)?;
    let labels = atlas.leaves_zero_tau();
    out.push(Check::with_detail(
        "leaves.count-w-tau-classes",
        labels.len() == atlas.tau_classes().len(),
        format!("{} leaves", labels.len()),
    ));
    out.push(Check::new("leaves.count-twists", labels.len() == atlas.leaf_count_via_twists()));
    out.push(Check::new("leaves.count-double", labels.len() == atlas.double_component_count()));
    out.push(Check::new("leaves.double-single", atlas.double_single_agree()));
    out.push(Check::new(
        "leaves.dimension",
        labels.iter().all(|l| l.dim == 2 * l.split.tau_rank && l.dim == l.dim_via_w_tau),
    ));
    let dictionaries = (0..atlas.classes().len())
        .filter_map(|c| atlas.class_twists(c))
        .all(|t| t.dictionary.criterion_holds && t.dictionary.well_defined && t.dictionary.bijective);
    out.push(Check::new("tau.dictionary", dictionaries));
    Ok(out)
}

// ---- Cherednik algebras ----

/// A random element with `terms` monomials, `x`- and `y`-degrees at most
/// `max_deg`, and small integer coefficients.
pub fn random_element(eng: &Cherednik, rng: &mut impl Rng, terms: usize, max_deg: u32) -> CherElement {
    let n = eng.dim();
    let mut out = CherElement::zero();
    let exps = |rng: &mut dyn rand::RngCore| {
        let mut v = vec![0u32; n];
        for _ in 0..rng.gen_range(0..=max_deg) {
            v[rng.gen_range(0..n)] += 1;
        }
        v
    };
    while out.is_zero() {
        for _ in 0..terms.max(1) {
            let x = exps(rng);
            let y = exps(rng);
            let w = rng.gen_range(0..eng.group().order());
            let mut c = rng.gen_range(-3i64..=3);
            if c == 0 {
                c = 1;
            }
            out.add_term(CherMonomial { x, w, y }, &Coeff::constant(CycNum::from_int(c)));
        }
    }
    out
}

/// A random `k` with small rational values.
pub fn random_parameter(w: &ReflectionGroup, rng: &mut impl Rng) -> ParameterK {
    let values = (0..w.orbit_count())
        .map(|o| (0..w.orbit_e(o)).map(|_| CycNum::from_rat(rat(rng.gen_range(-4..=4), rng.gen_range(1..=3)))).collect())
        .collect();
    ParameterK::new(w, values).expect("one value per residue")
}

pub struct CherednikSample {
    pub triples: usize,
    pub terms: usize,
    pub max_deg: u32,
    pub seed: u64,
}

impl Default for CherednikSample {
    fn default() -> Self {
        CherednikSample { triples: 200, terms: 2, max_deg: 2, seed: 7 }
    }
}

/// PBW and structural checks on random samples in the `t`-deformed algebra.
pub fn cherednik_checks(w: Arc<ReflectionGroup>, k: &ParameterK, sample: &CherednikSample) -> Result<Vec<Check>> {
    let eng = Cherednik::new(w.clone(), k.clone(), Mode::TDeform)?;
    let mut rng = ChaCha8Rng::seed_from_u64(sample.seed);
    let triples: Vec<[CherElement; 3]> = (0..sample.triples)
        .map(|_| std::array::from_fn(|_| random_element(&eng, &mut rng, sample.terms, sample.max_deg)))
        .collect();
    let mut out = Vec::new();

    let assoc = crate::par::map(&triples, |[a, b, c]| {
        eng.multiply(&eng.multiply(a, b), c) == eng.multiply(a, &eng.multiply(b, c))
    });
    let failures = assoc.iter().filter(|ok| !**ok).count();
    out.push(Check::with_detail(
        "cherednik.associativity",
        failures == 0,
        format!("{} triples, {failures} failures", triples.len()),
    ));

    let normal = triples.iter().flat_map(|t| t.iter()).flat_map(|e| e.terms()).all(|(m, _)| {
        let ordered = eng.product(&[
            eng.monomial(m.x.clone(), 0, vec![0; w.dim()]),
            eng.group_element(m.w),
            eng.monomial(vec![0; w.dim()], 0, m.y.clone()),
        ]);
        let single = CherElement::from_monomial(m.clone(), Coeff::one());
        ordered == single && eng.parse(&eng.format(&single)).as_ref() == Ok(&single)
    });
    out.push(Check::new("cherednik.normal-form-identity", normal));

    // single monomials are homogeneous for both the grading and the filtration
    let monomial = |e: &CherElement| {
        let (m, _) = e.terms().next().expect("nonempty sample");
        CherElement::from_monomial(m.clone(), Coeff::one())
    };
    let grading = triples.iter().all(|[a, b, _]| {
        let (a, b) = (monomial(a), monomial(b));
        let p = eng.multiply(&a, &b);
        p.is_zero() || p.euler_degree() == Some(a.euler_degree().unwrap() + b.euler_degree().unwrap())
    });
    out.push(Check::new("cherednik.grading", grading));

    let h0 = Cherednik::new(w.clone(), ParameterK::zero(&w), Mode::TZero)?;
    let filtration = triples.iter().all(|[a, b, _]| {
        let (fa, fb) = (a.filtration_degree().unwrap(), b.filtration_degree().unwrap());
        let p = eng.multiply(a, b);
        let bounded = p.filtration_degree().is_none_or(|f| f <= fa + fb);
        let lead = h0.multiply(&a.associated_graded_leading(), &b.associated_graded_leading());
        bounded && p.graded_part(fa + fb) == lead
    });
    out.push(Check::new("cherednik.filtration-leading", filtration));

    let shift: Vec<CycNum> = (0..w.orbit_count()).map(|o| CycNum::from_rat(rat(2 * o as i64 + 3, 2))).collect();
    let shifted = eng.with_k(k.shifted(&shift))?;
    let relations_equal = (0..w.dim()).all(|i| (0..w.dim()).all(|j| eng.relation(i, j) == shifted.relation(i, j)));
    let products_equal = triples.iter().take(50).all(|[a, b, _]| eng.multiply(a, b) == shifted.multiply(a, b));
    out.push(Check::new("cherednik.parameter-shift", relations_equal && products_equal));

    out.push(Check::new("cherednik.equivariance", relation_equivariant(&eng)));

    let hbar = eng.with_mode(Mode::HbarDeform)?;
    let tzero = eng.with_mode(Mode::TZero)?;
    let theta = triples.iter().take(50).all(|[a, b, _]| {
        hbar.multiply(a, b).theta() == tzero.multiply(&a.theta(), &b.theta())
    });
    out.push(Check::new("cherednik.rees-theta", theta));
    let mut special = true;
    for lambda in [0i64, 1, 2] {
        let l = CycNum::from_int(lambda);
        let target = Cherednik::new(w.clone(), k.scaled(&(&l * &l)), Mode::TZero)?;
        special &= triples.iter().take(30).all(|[a, b, _]| {
            hbar.rees_specialize(&hbar.multiply(a, b), &l)
                == target.multiply(&hbar.rees_specialize(a, &l), &hbar.rees_specialize(b, &l))
        });
    }
    out.push(Check::new("cherednik.rees-specialize", special));
    Ok(out)
}

/// `w [y_i, x_j] w^-1 = [w.y_i, w.x_j]` for the generators `w` of `W`.
pub fn relation_equivariant(eng: &Cherednik) -> bool {
    let w = eng.group();
    let n = w.dim();
    w.generators().iter().all(|&g| {
        let m = w.matrix(g);
        let minv = w.matrix(w.inv(g));
        let gi = eng.group_element(g);
        let ginv = eng.group_element(w.inv(g));
        (0..n).all(|i| {
            (0..n).all(|j| {
                let lhs = eng.product(&[gi.clone(), eng.relation(i, j), ginv.clone()]);
                let wy = eng.y_linear(&(0..n).map(|l| m.get(l, i).clone()).collect::<Vec<_>>());
                let wx = eng.x_linear(&(0..n).map(|l| minv.get(j, l).clone()).collect::<Vec<_>>());
                lhs == eng.commutator(&wy, &wx)
            })
        })
    })
}

/// Bounded-degree central elements of `mu_e` (all `Z`-degrees, filtration
/// at most `filt`), computed at `t = 0`.
pub fn central_sample(eng: &Cherednik, filt: u32) -> Result<Vec<CherElement>> {
    let mut out = Vec::new();
    for z in -(filt as i64)..=(filt as i64) {
        out.extend(eng.central_elements_bounded(z, filt, 20_000)?);
    }
    Ok(out)
}

/// Poisson bracket axioms on central elements of `mu_e` of filtration at most `filt`.
pub fn poisson_checks(e: u32, k: &ParameterK, filt: u32) -> Result<Vec<Check>> {
    let w = Arc::new(groups::cyclic(e));
    let tzero = Cherednik::new(w.clone(), k.clone(), Mode::TZero)?;
    let tdef = tzero.with_mode(Mode::TDeform)?;
    let z = central_sample(&tzero, filt)?;
    let bracket = |a: &CherElement, b: &CherElement| tdef.poisson_bracket(a, b);
    let n = z.len();
    let mut table = vec![vec![CherElement::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            table[i][j] = bracket(&z[i], &z[j])?;
        }
    }
    let mut antisym = true;
    let mut graded = true;
    let mut drop = true;
    let mut central = true;
    for i in 0..n {
        for j in 0..n {
            let p = &table[i][j];
            antisym &= *p == table[j][i].scale(&CycNum::from_int(-1));
            if p.is_zero() {
                continue;
            }
            let (di, dj) = (z[i].euler_degree().unwrap(), z[j].euler_degree().unwrap());
            graded &= p.euler_degree() == Some(di + dj);
            let (fi, fj) = (z[i].filtration_degree().unwrap(), z[j].filtration_degree().unwrap());
            drop &= p.filtration_degree().unwrap() + 2 <= fi + fj;
            central &= tzero.is_central(p);
        }
    }
    let mut leibniz = true;
    let mut jacobi = true;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let bc = tzero.multiply(&z[b], &z[c]);
                let lhs = bracket(&z[a], &bc)?;
                let rhs = tzero.multiply(&table[a][b], &z[c]).add(&tzero.multiply(&z[b], &table[a][c]));
                leibniz &= lhs == rhs;
                let j1 = bracket(&z[a], &table[b][c])?;
                let j2 = bracket(&z[b], &table[c][a])?;
                let j3 = bracket(&z[c], &table[a][b])?;
                jacobi &= j1.add(&j2).add(&j3).is_zero();
            }
        }
    }
    let detail = format!("mu_{e}, {n} central elements");
    Ok(vec![
        Check::with_detail("poisson.antisymmetry", antisym, detail.clone()),
        Check::with_detail("poisson.leibniz", leibniz, detail.clone()),
        Check::with_detail("poisson.jacobi", jacobi, detail.clone()),
        Check::with_detail("poisson.z-degree", graded, detail.clone()),
        Check::with_detail("poisson.filtration-drop", drop, detail.clone()),
        Check::with_detail("poisson.central", central, detail),
    ])
}

/// Rank-one quadric: `Z^2 - XY` is a scalar, vanishing at `k = 0`, scaling
/// by `lambda^2` under `k -> lambda k`.
pub fn quadric_checks(k: &ParameterK) -> Result<Vec<Check>> {
    let w = Arc::new(groups::cyclic(2));
    let base = match rank1_center_relation(w.clone(), k.clone()) {
        Ok(r) => r,
        Err(crate::error::Error::Verification(d)) => {
            return Ok(vec![Check::with_detail("cherednik.quadric-scalar", false, d)]);
        }
        Err(e) => return Err(e),
    };
    let zero = rank1_center_relation(w.clone(), ParameterK::zero(&w))?;
    let mut scaling = true;
    for lambda in [2i64, 3] {
        let l = CycNum::from_int(lambda);
        let r = rank1_center_relation(w.clone(), k.scaled(&l))?;
        scaling &= r.gamma == &base.gamma * &(&l * &l);
    }
    Ok(vec![
        Check::with_detail("cherednik.quadric-scalar", true, format!("gamma = {}", base.gamma)),
        Check::new("cherednik.quadric-zero", zero.gamma.is_zero()),
        Check::new("cherednik.quadric-scaling", scaling),
    ])
}

/// Everything applicable to a group, an automorphism and a parameter.
pub fn suite(ctx: &TauContext, k: &ParameterK, sample: &CherednikSample) -> Result<Vec<Check>> {
    let w = ctx.group_arc();
    let mut out = group_checks(&w);
    out.extend(tau_checks(ctx)?);
    out.extend(leaf_checks(ctx)?);
    if w.dim() <= 2 && w.order() <= 24 {
        out.extend(cherednik_checks(w.clone(), k, sample)?);
    }
    if w.dim() == 1 && w.order() <= 4 {
        out.extend(poisson_checks(w.order() as u32, k, 4)?);
    }
    if w.dim() == 1 && w.order() == 2 {
        out.extend(quadric_checks(k)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b2_suite_passes() {
        let w = Arc::new(groups::b(2));
        let ctx = TauContext::build(w.clone(), crate::linalg::Matrix::identity(2), 1000).unwrap();
        let k = ParameterK::new(&w, vec![vec![CycNum::zero(), CycNum::one()], vec![CycNum::zero(), CycNum::from_int(2)]]).unwrap();
        let sample = CherednikSample { triples: 20, ..Default::default() };
        let checks = suite(&ctx, &k, &sample).unwrap();
        for c in &checks {
            assert!(c.pass, "{} failed", c.id);
        }
    }

    #[test]
    fn mu2_poisson_and_quadric() {
        let w = groups::cyclic(2);
        let k = ParameterK::new(&w, vec![vec![CycNum::zero(), CycNum::one()]]).unwrap();
        assert!(all_pass(&poisson_checks(2, &k, 4).unwrap()));
        assert!(all_pass(&quadric_checks(&k).unwrap()));
    }
}
