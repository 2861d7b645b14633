//! Strata of `V/W` and `(V x V*)/W`, their tau-fixed pieces, and the labels
//! of the symplectic leaves of the fixed locus at `k = 0`.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;

use crate::linalg::{Matrix, Subspace, Vector};
use crate::par;
use crate::refgroup::{Parabolic, ParabolicClass, ReflectionGroup};
use crate::tau::{SplitDictionary, SplitParabolic, TauContext, TwistClasses};
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StratumKind {
    Single,
    Double,
}

#[derive(Clone, Debug, Serialize)]
pub struct Stratum {
    pub parabolic_class: usize,
    pub kind: StratumKind,
    pub dimension: usize,
    pub parabolic_order: usize,
    /// `|N_W(P)/P|`, the group acting on the normalized closure.
    pub normalizer_order: usize,
    /// Classes whose strata lie in the closure of this one.
    pub closure: Vec<usize>,
}

pub fn strata_single(w: &ReflectionGroup) -> Vec<Stratum> {
    strata(w, StratumKind::Single)
}

pub fn strata_double(w: &ReflectionGroup) -> Vec<Stratum> {
    strata(w, StratumKind::Double)
}

fn strata(w: &ReflectionGroup, kind: StratumKind) -> Vec<Stratum> {
    let classes = w.parabolic_classes();
    let factor = if kind == StratumKind::Double { 2 } else { 1 };
    let normalizers = par::map(&classes, |c| w.normalizer(&c.rep).quotient_order());
    classes
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let x = &c.rep.fixed_space;
            let closure = classes
                .iter()
                .enumerate()
                .filter(|(_, d)| d.flats.iter().any(|f| f.is_subspace_of(x)))
                .map(|(j, _)| j)
                .collect();
            Stratum {
                parabolic_class: i,
                kind,
                dimension: factor * x.dim(),
                parabolic_order: c.rep.order(),
                normalizer_order: normalizers[i],
                closure,
            }
        })
        .collect()
}

/// Fixed space of a set of elements acting on `V*`.
pub fn dual_fixed_space(w: &ReflectionGroup, elems: &[usize]) -> Subspace {
    let rows: Vec<Vector> = elems
        .iter()
        .filter(|&&e| e != 0)
        .flat_map(|&e| w.matrix(e).transpose().minus_identity().row_vecs())
        .collect();
    Subspace::kernel_of(w.dim(), rows)
}

/// The dual hyperplanes, as linear forms on `V*`.
pub fn dual_forms(w: &ReflectionGroup) -> Vec<Vector> {
    w.hyperplanes().iter().map(|h| h.alpha_vee.clone()).collect()
}

/// `W_v cap W_{v*}`, sorted.
pub fn double_stabilizer(w: &ReflectionGroup, v: &[crate::exactnum::CycNum], vs: &[crate::exactnum::CycNum]) -> Vec<usize> {
    par::filter_range(w.order(), |i| {
        let m = w.matrix(i);
        m.mul_vec(v) == v && m.transpose().mul_vec(vs) == vs
    })
}

/// Does the generic pair of `V^P x V*^P` have joint stabilizer exactly `P`?
pub fn double_witness_ok(w: &ReflectionGroup, p: &Parabolic) -> bool {
    let dual = dual_fixed_space(w, &p.elements);
    let vs = dual.generic_point(&dual_forms(w));
    double_stabilizer(w, &p.witness, &vs) == p.elements
}

/// Is `VV*(P)^g` nonempty for `g = w tau`?
pub fn double_meets(ctx: &TauContext, p: &Parabolic, w: usize) -> bool {
    let grp = ctx.group();
    let g = grp.matrix(w).mul(ctx.tau());
    let y = p.fixed_space.intersect(&g.fixed_space());
    let dual_g: Matrix = g.transpose();
    let ys = dual_fixed_space(grp, &p.elements).intersect(&dual_g.fixed_space());
    let v = y.generic_point(&grp.alphas());
    let vs = ys.generic_point(&dual_forms(grp));
    double_stabilizer(grp, &v, &vs) == p.elements
}

#[derive(Clone, Debug, Serialize)]
pub struct TauComponent {
    /// Index of the twist class for the chosen split member of the class.
    pub twist_class: usize,
    /// Class in `Parab(W_tau)/W_tau` matched to this component.
    pub p_tau_class: usize,
    pub dim: usize,
}

/// Data attached to one conjugacy class of parabolics for a given tau.
pub struct ClassTwists {
    pub base: Parabolic,
    pub twists: TwistClasses,
    pub dictionary: SplitDictionary,
}

pub struct LeafAtlas<'a> {
    ctx: &'a TauContext,
    classes: Vec<ParabolicClass>,
    class_of_flat: HashMap<Subspace, usize>,
    tau_classes: Vec<ParabolicClass>,
    tau_class_of_flat: HashMap<Subspace, usize>,
    twists: Vec<Option<ClassTwists>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjBModel {
    pub space_dim: usize,
    pub normalizer_order: usize,
    pub parameter: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct LeafLabel {
    pub p_class: usize,
    pub p_tau_class: usize,
    pub twist_class: usize,
    pub dim: usize,
    pub cuspidal_point: String,
    #[serde(rename = "conjB_model")]
    pub conj_b_model: ConjBModel,
    #[serde(skip)]
    pub split: SplitParabolic,
    #[serde(skip)]
    pub dim_via_w_tau: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedStratumLabel {
    pub p_tau_class: usize,
    pub dim: usize,
}

impl<'a> LeafAtlas<'a> {
    pub fn new(ctx: &'a TauContext) -> Result<Self> {
        ctx.require_full()?;
        let w = ctx.group();
        let classes = w.parabolic_classes();
        let class_of_flat = flat_index(&classes);
        let tau_classes = ctx.w_tau().parabolic_classes();
        let tau_class_of_flat = flat_index(&tau_classes);
        let twists = par::map(&classes, |c| {
            let base_flat = c.flats.iter().find(|x| ctx.is_split_flat(x))?;
            let base = w.pointwise_stabilizer(base_flat);
            let twists = ctx.twist_classes(&base);
            let dictionary = ctx.split_dictionary(&base, &twists);
            Some(ClassTwists { base, twists, dictionary })
        });
        Ok(LeafAtlas { ctx, classes, class_of_flat, tau_classes, tau_class_of_flat, twists })
    }

    pub fn classes(&self) -> &[ParabolicClass] {
        &self.classes
    }

    pub fn tau_classes(&self) -> &[ParabolicClass] {
        &self.tau_classes
    }

    pub fn class_twists(&self, class: usize) -> Option<&ClassTwists> {
        self.twists[class].as_ref()
    }

    /// Components of `U(class)^tau`, one per twist class.
    pub fn tau_components(&self, class: usize) -> Vec<TauComponent> {
        let Some(t) = &self.twists[class] else {
            return Vec::new();
        };
        let d = &t.dictionary;
        d.orbit_class
            .iter()
            .zip(&d.orbits)
            .map(|(&tc, orbit)| {
                let flat = &d.entries[orbit[0]].0;
                let y = flat.intersect(self.ctx.v_tau());
                let q = self.ctx.w_tau().flat_closure(&self.ctx.to_coords(&y));
                TauComponent { twist_class: tc, p_tau_class: self.tau_class_of_flat[&q], dim: y.dim() }
            })
            .collect()
    }

    /// Leaves of the fixed locus at `k = 0`, one per class of `Parab(W_tau)`.
    pub fn leaves_zero_tau(&self) -> Vec<LeafLabel> {
        let ctx = self.ctx;
        let w = ctx.group();
        par::map_range(self.tau_classes.len(), |qi| {
            let q = &self.tau_classes[qi];
            let y = ctx.lift(&q.rep.fixed_space);
            let x = w.flat_closure(&y);
            let split = ctx.split_parabolic(&x).expect("flat closure of a W_tau flat is split");
            let p_class = self.class_of_flat[&x];
            let twist_class = self.twists[p_class]
                .as_ref()
                .and_then(|t| t.dictionary.entries.iter().find(|(f, _)| f == &x).map(|(_, c)| *c))
                .expect("split conjugate is in the dictionary");
            let normalizer_order = ctx.w_tau().normalizer(&split.p_tau).quotient_order();
            LeafLabel {
                p_class,
                p_tau_class: qi,
                twist_class,
                dim: 2 * split.tau_rank,
                cuspidal_point: "origin".into(),
                conj_b_model: ConjBModel {
                    space_dim: split.tau_rank,
                    normalizer_order,
                    parameter: "0".into(),
                },
                dim_via_w_tau: 2 * q.rep.fixed_space.dim(),
                split,
            }
        })
    }

    /// Leaf count obtained from the `W` side: twist classes summed over classes.
    pub fn leaf_count_via_twists(&self) -> usize {
        self.twists.iter().flatten().map(|t| t.twists.classes.len()).sum()
    }

    /// For every class and every coset `wP` of the base split member, the
    /// single and double nonemptiness tests agree.
    pub fn double_single_agree(&self) -> bool {
        self.twists.iter().flatten().all(|t| {
            let reps = t.twists.normalizer.reps();
            let e: HashSet<usize> = t.twists.e_tilde.iter().copied().collect();
            par::map_range(reps.len(), |c| double_meets(self.ctx, &t.base, reps[c]) == e.contains(&c))
                .into_iter()
                .all(|b| b)
        })
    }

    /// Number of components of all `UU*(class)^tau`, counted through the
    /// double test and twisted conjugation.
    pub fn double_component_count(&self) -> usize {
        let w = self.ctx.group();
        self.twists
            .iter()
            .flatten()
            .map(|t| {
                let nz = &t.twists.normalizer;
                let reps = nz.reps();
                let e: Vec<usize> = par::filter_range(reps.len(), |c| double_meets(self.ctx, &t.base, reps[c]));
                let coset: HashMap<usize, usize> =
                    nz.cosets.iter().enumerate().flat_map(|(i, c)| c.iter().map(move |&x| (x, i))).collect();
                let mut seen: HashSet<usize> = HashSet::new();
                let mut count = 0;
                for &c in &e {
                    if seen.contains(&c) {
                        continue;
                    }
                    count += 1;
                    for &u in &reps {
                        let img = w.mul(w.mul(u, reps[c]), w.inv(self.ctx.tau_conj(u)));
                        seen.insert(coset[&img]);
                    }
                }
                count
            })
            .sum()
    }

    /// Image of the closure of a leaf under the map to `V/W x V*/W`.
    pub fn leaf_image(&self, leaf: &LeafLabel) -> (ClosedStratumLabel, ClosedStratumLabel) {
        let l = ClosedStratumLabel { p_tau_class: leaf.p_tau_class, dim: leaf.dim / 2 };
        (l.clone(), l)
    }
}

fn flat_index(classes: &[ParabolicClass]) -> HashMap<Subspace, usize> {
    classes
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.flats.iter().map(move |f| (f.clone(), i)))
        .collect()
}

/// Leaf dimensions sorted descending.
pub fn leaf_dims(leaves: &[LeafLabel]) -> Vec<usize> {
    let mut d: Vec<usize> = leaves.iter().map(|l| l.dim).collect();
    d.sort_unstable_by(|a, b| b.cmp(a));
    d
}

/// Multiset of dims per class for comparisons.
pub fn dims_by_class(strata: &[Stratum]) -> BTreeMap<usize, usize> {
    strata.iter().map(|s| (s.parabolic_class, s.dimension)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::CycNum;
    use crate::groups;
    use crate::refgroup::default_cap;
    use std::sync::Arc;

    fn ctx(w: ReflectionGroup, tau: Matrix) -> TauContext {
        TauContext::build(Arc::new(w), tau, default_cap()).unwrap()
    }

    #[test]
    fn single_strata_dims() {
        let dims = |w: &ReflectionGroup| strata_single(w).iter().map(|s| s.dimension).collect::<Vec<_>>();
        assert_eq!(dims(&groups::cyclic(2)), vec![1, 0]);
        assert_eq!(dims(&groups::b(2)), vec![2, 1, 1, 0]);
        assert_eq!(dims(&groups::g4()), vec![2, 1, 0]);
    }

    #[test]
    fn double_strata_dims() {
        let dims = |w: &ReflectionGroup| strata_double(w).iter().map(|s| s.dimension).collect::<Vec<_>>();
        assert_eq!(dims(&groups::cyclic(2)), vec![2, 0]);
        assert_eq!(dims(&groups::b(2)), vec![4, 2, 2, 0]);
        assert_eq!(dims(&ReflectionGroup::trivial(3)), vec![6]);
    }

    #[test]
    fn double_witnesses_have_stabilizer_p() {
        let w = groups::b(3);
        for c in w.parabolic_classes() {
            assert!(double_witness_ok(&w, &c.rep));
        }
    }

    #[test]
    fn identity_leaves_are_double_strata() {
        let c = ctx(groups::b(2), Matrix::identity(2));
        let atlas = LeafAtlas::new(&c).unwrap();
        let leaves = atlas.leaves_zero_tau();
        assert_eq!(leaves.iter().map(|l| l.dim).collect::<Vec<_>>(), vec![4, 2, 2, 0]);
        assert_eq!(atlas.leaf_count_via_twists(), 4);
    }

    #[test]
    fn zero_fixed_space_has_one_leaf() {
        let c = ctx(groups::cyclic(2), Matrix::scalar(1, &CycNum::root_of_unity(4, 1)));
        let atlas = LeafAtlas::new(&c).unwrap();
        let leaves = atlas.leaves_zero_tau();
        assert_eq!(leaves.len(), 1);
        assert_eq!(leaves[0].dim, 0);
    }

    #[test]
    fn image_of_origin_leaf_is_a_point() {
        let c = ctx(groups::b(2), Matrix::identity(2));
        let atlas = LeafAtlas::new(&c).unwrap();
        let leaves = atlas.leaves_zero_tau();
        let last = leaves.last().unwrap();
        assert_eq!(atlas.leaf_image(last).0.dim, 0);
        assert_eq!(atlas.leaf_image(&leaves[0]).0.dim, 2);
    }
}
