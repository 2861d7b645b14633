//! Automorphisms normalizing `W`: fullness, the Lehrer-Springer group `W_tau`
//! on `V^tau`, split parabolic subgroups and twist classes.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactnum::CycNum;
use crate::linalg::{normalize_first, Matrix, Subspace, Vector};
use crate::par;
use crate::refgroup::{Normalizer, Parabolic, ReflectionGroup};

const ORDER_CAP: usize = 10_000;

/// How an automorphism is specified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TauSpec {
    Identity,
    /// `zeta_n^e` times the product of the listed generators.
    Word { word: Vec<usize>, zeta: (u32, i64) },
    Matrix(Matrix),
}

impl TauSpec {
    pub fn resolve(&self, w: &ReflectionGroup) -> Result<Matrix> {
        match self {
            TauSpec::Identity => Ok(Matrix::identity(w.dim())),
            TauSpec::Word { word, zeta } => {
                if zeta.0 == 0 {
                    return Err(Error::Invalid("root of unity order must be positive".into()));
                }
                let e = w.element_from_word(word)?;
                Ok(w.matrix(e).scale(&CycNum::root_of_unity(zeta.0, zeta.1)))
            }
            TauSpec::Matrix(m) => {
                if m.rows() != w.dim() || m.cols() != w.dim() {
                    return Err(Error::Invalid(format!("tau must be {0}x{0}", w.dim())));
                }
                Ok(m.clone())
            }
        }
    }
}

fn tau_order(tau: &Matrix) -> Result<usize> {
    let mut acc = tau.clone();
    for k in 1..=ORDER_CAP {
        if acc.is_identity() {
            return Ok(k);
        }
        acc = acc.mul(tau);
    }
    Err(Error::InfiniteOrder(ORDER_CAP))
}

fn check_normalizes(w: &ReflectionGroup, tau: &Matrix) -> Result<Matrix> {
    let inv = tau.inverse().ok_or_else(|| Error::Invalid("tau is not invertible".into()))?;
    for &g in w.generators() {
        if w.lookup(&tau.mul(w.matrix(g)).mul(&inv)).is_none() {
            return Err(Error::NotNormalizing);
        }
    }
    Ok(inv)
}

/// `w tau` with maximal fixed-space dimension, scanning `W` in element order.
pub fn make_full(w: &ReflectionGroup, tau: &Matrix) -> Result<Matrix> {
    check_normalizes(w, tau)?;
    tau_order(tau)?;
    let dims = par::map_range(w.order(), |i| w.matrix(i).mul(tau).fixed_space().dim());
    let best = *dims.iter().max().expect("nonempty group");
    let first = dims.iter().position(|&d| d == best).unwrap();
    Ok(w.matrix(first).mul(tau))
}

#[derive(Clone, Debug)]
pub struct SplitParabolic {
    pub parabolic: Parabolic,
    /// The corresponding parabolic subgroup of `W_tau`, in `V^tau` coordinates.
    pub p_tau: Parabolic,
    /// `(V^P)^tau`, as a subspace of `V`.
    pub fixed_tau: Subspace,
    pub tau_rank: usize,
}

#[derive(Clone, Debug)]
pub struct NormalizerTau {
    /// `|N_{W_tau}(P_tau) / P_tau|`.
    pub order: usize,
    /// Image of the embedding, as coset indices of `N_W(P)/P`.
    pub image: Vec<usize>,
    /// Cosets fixed by `tau`.
    pub tau_fixed: Vec<usize>,
    pub injective: bool,
}

impl NormalizerTau {
    pub fn image_is_tau_fixed(&self) -> bool {
        self.injective && self.image == self.tau_fixed
    }
}

#[derive(Clone, Debug)]
pub struct TwistClasses {
    pub normalizer: Normalizer,
    /// Cosets `wP` with `V(P)^{w tau}` nonempty.
    pub e_tilde: Vec<usize>,
    /// Classes under twisted conjugation, each a sorted list of coset indices.
    pub classes: Vec<Vec<usize>>,
}

impl TwistClasses {
    pub fn class_of(&self, coset: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.binary_search(&coset).is_ok())
    }
}

/// The map `xPx^-1 -> [x^-1 tau(x)]` and its checks.
#[derive(Clone, Debug)]
pub struct SplitDictionary {
    /// Split conjugates (by fixed space) with their twist class.
    pub entries: Vec<(Subspace, usize)>,
    /// `W_tau`-orbits of split conjugates (indices into `entries`).
    pub orbits: Vec<Vec<usize>>,
    /// Twist class reached by each orbit.
    pub orbit_class: Vec<usize>,
    /// Criterion (a): split iff `x^-1 tau(x)` lies in `E_P`, for every `x`.
    pub criterion_holds: bool,
    pub well_defined: bool,
    pub bijective: bool,
}

pub struct TauContext {
    group: Arc<ReflectionGroup>,
    tau: Matrix,
    tau_inv: Matrix,
    order: usize,
    v_tau: Subspace,
    delta: usize,
    setwise: Vec<usize>,
    pointwise: Vec<usize>,
    w_tau: ReflectionGroup,
    section: Vec<usize>,
    projection: HashMap<usize, usize>,
    tau_conj: Vec<usize>,
}

impl TauContext {
    pub fn build(group: Arc<ReflectionGroup>, tau: Matrix, cap: usize) -> Result<Self> {
        if tau.rows() != group.dim() || tau.cols() != group.dim() {
            return Err(Error::Invalid(format!("tau must be {0}x{0}", group.dim())));
        }
        let tau_inv = check_normalizes(&group, &tau)?;
        let order = tau_order(&tau)?;
        let w = &group;
        let tau_conj = par::map_range(w.order(), |i| {
            w.lookup(&tau.mul(w.matrix(i)).mul(&tau_inv)).expect("tau normalizes W")
        });
        let v_tau = tau.fixed_space();
        let delta = par::map_range(w.order(), |i| w.matrix(i).mul(&tau).fixed_space().dim())
            .into_iter()
            .max()
            .unwrap_or(0);
        let setwise = w.setwise_stabilizer(&v_tau);
        let pointwise = w.pointwise_stabilizer(&v_tau).elements;
        let restricted = par::map(&setwise, |&i| v_tau.restrict(w.matrix(i)));
        let mut w_tau = ReflectionGroup::from_elements("W_tau", v_tau.dim(), restricted.clone(), cap)?;
        w_tau.set_name(&format!("W_tau({})", w.name()));
        let mut section = vec![usize::MAX; w_tau.order()];
        let mut projection = HashMap::new();
        for (&wi, m) in setwise.iter().zip(&restricted) {
            let j = w_tau.lookup(m).expect("restricted element");
            projection.insert(wi, j);
            if section[j] == usize::MAX {
                section[j] = wi;
            }
        }
        Ok(TauContext {
            group,
            tau,
            tau_inv,
            order,
            v_tau,
            delta,
            setwise,
            pointwise,
            w_tau,
            section,
            projection,
            tau_conj,
        })
    }

    pub fn group(&self) -> &ReflectionGroup {
        &self.group
    }

    pub fn group_arc(&self) -> Arc<ReflectionGroup> {
        self.group.clone()
    }

    pub fn tau(&self) -> &Matrix {
        &self.tau
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn v_tau(&self) -> &Subspace {
        &self.v_tau
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn is_full(&self) -> bool {
        self.delta == self.v_tau.dim()
    }

    pub fn require_full(&self) -> Result<()> {
        if self.is_full() {
            Ok(())
        } else {
            Err(Error::NotFull { dim: self.v_tau.dim(), delta: self.delta })
        }
    }

    pub fn setwise(&self) -> &[usize] {
        &self.setwise
    }

    pub fn pointwise(&self) -> &[usize] {
        &self.pointwise
    }

    pub fn w_tau(&self) -> &ReflectionGroup {
        &self.w_tau
    }

    /// Minimal representative in `W^set` of an element of `W_tau`.
    pub fn section(&self, u: usize) -> usize {
        self.section[u]
    }

    pub fn project(&self, w: usize) -> Option<usize> {
        self.projection.get(&w).copied()
    }

    /// `tau w tau^-1`.
    pub fn tau_conj(&self, w: usize) -> usize {
        self.tau_conj[w]
    }

    pub fn is_regular(&self) -> bool {
        !self.group.hyperplanes().iter().any(|h| self.v_tau.annihilated_by(&h.alpha))
    }

    /// A subspace of `V^tau` in `W_tau` coordinates, lifted back to `V`.
    pub fn lift(&self, s: &Subspace) -> Subspace {
        Subspace::span(self.group.dim(), s.basis().iter().map(|c| self.v_tau.from_coords(c)).collect())
    }

    /// A subspace of `V^tau` (in `V`) in `W_tau` coordinates.
    pub fn to_coords(&self, s: &Subspace) -> Subspace {
        Subspace::span(self.v_tau.dim(), s.basis().iter().map(|b| self.v_tau.coords(b)).collect())
    }

    pub fn lehrer_springer_group(&self) -> Result<&ReflectionGroup> {
        self.require_full()?;
        Ok(&self.w_tau)
    }

    /// Reflecting hyperplanes of `W_tau` equal the traces `H cap V^tau` of the
    /// hyperplanes of `W` not containing `V^tau`.
    pub fn hyperplane_traces_match(&self) -> bool {
        let traces: BTreeSet<Vec<CycNum>> = self
            .group
            .hyperplanes()
            .iter()
            .filter(|h| !self.v_tau.annihilated_by(&h.alpha))
            .map(|h| {
                let r: Vector = self.v_tau.basis().iter().map(|b| crate::linalg::dot(&h.alpha, b)).collect();
                normalize_first(&r)
            })
            .collect();
        let own: BTreeSet<Vec<CycNum>> = self.w_tau.hyperplanes().iter().map(|h| h.alpha.clone()).collect();
        traces == own
    }

    /// Is `P` (given by its fixed space `V^P`) split, i.e. the pointwise
    /// stabilizer of `V^P cap V^tau`?
    pub fn is_split_flat(&self, x: &Subspace) -> bool {
        &self.group.flat_closure(&x.intersect(&self.v_tau)) == x
    }

    pub fn split_parabolic(&self, x: &Subspace) -> Option<SplitParabolic> {
        if !self.is_split_flat(x) {
            return None;
        }
        let fixed_tau = x.intersect(&self.v_tau);
        let parabolic = self.group.pointwise_stabilizer(x);
        let p_tau = self.w_tau.pointwise_stabilizer(&self.to_coords(&fixed_tau));
        let tau_rank = fixed_tau.dim();
        Some(SplitParabolic { parabolic, p_tau, fixed_tau, tau_rank })
    }

    /// All split parabolic subgroups, in flat order.
    pub fn split_parabolics(&self) -> Result<Vec<SplitParabolic>> {
        self.require_full()?;
        let flats = self.group.flats();
        Ok(par::map(&flats, |x| self.split_parabolic(x)).into_iter().flatten().collect())
    }

    /// `(V^P)^tau = (V^tau)^{P_tau}`.
    pub fn vptau_holds(&self, sp: &SplitParabolic) -> bool {
        self.lift(&sp.p_tau.fixed_space) == sp.fixed_tau
    }

    pub fn is_tau_stable(&self, sub: &[usize]) -> bool {
        let set: HashSet<usize> = sub.iter().copied().collect();
        sub.iter().all(|&p| set.contains(&self.tau_conj[p]))
    }

    pub fn normalizer_tau(&self, sp: &SplitParabolic) -> NormalizerTau {
        let w = &self.group;
        let nw = w.normalizer(&sp.parabolic);
        let ntau = self.w_tau.normalizer(&sp.p_tau);
        let mut image: Vec<usize> = ntau
            .reps()
            .iter()
            .map(|&u| nw.coset_of(self.section(u)).expect("section normalizes P"))
            .collect();
        let before = image.len();
        image.sort_unstable();
        image.dedup();
        let injective = image.len() == before;
        let p: HashSet<usize> = sp.parabolic.elements.iter().copied().collect();
        let tau_fixed: Vec<usize> = nw
            .reps()
            .iter()
            .enumerate()
            .filter(|(_, &n)| p.contains(&w.mul(w.inv(n), self.tau_conj[n])))
            .map(|(i, _)| i)
            .collect();
        NormalizerTau { order: ntau.quotient_order(), image, tau_fixed, injective }
    }

    /// Does `V(P)^{g}` meet, for `g = w tau`? Tested on the generic point of
    /// `V^P cap V^{w tau}`.
    pub fn meets_open_stratum(&self, x: &Subspace, w: usize) -> bool {
        let g = self.group.matrix(w).mul(&self.tau);
        let y = x.intersect(&g.fixed_space());
        &self.group.flat_closure(&y) == x
    }

    /// Twist classes for a parabolic (empty unless `P` is tau-stable).
    pub fn twist_classes(&self, p: &Parabolic) -> TwistClasses {
        let w = &self.group;
        let normalizer = w.normalizer(p);
        if !self.is_tau_stable(&p.elements) {
            return TwistClasses { normalizer, e_tilde: Vec::new(), classes: Vec::new() };
        }
        let reps = normalizer.reps();
        let e_tilde: Vec<usize> = par::filter_range(reps.len(), |c| self.meets_open_stratum(&p.fixed_space, reps[c]));
        let in_e: HashSet<usize> = e_tilde.iter().copied().collect();
        let coset_index: HashMap<usize, usize> = normalizer
            .cosets
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.iter().map(move |&x| (x, i)))
            .collect();
        let mut uf: Vec<usize> = (0..reps.len()).collect();
        fn find(uf: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while uf[r] != r {
                r = uf[r];
            }
            uf[x] = r;
            r
        }
        for &u in &reps {
            let tu_inv = w.inv(self.tau_conj[u]);
            for &c in &e_tilde {
                let img = w.mul(w.mul(u, reps[c]), tu_inv);
                let d = coset_index[&img];
                debug_assert!(in_e.contains(&d));
                let (a, b) = (find(&mut uf, c), find(&mut uf, d));
                if a != b {
                    uf[a.max(b)] = a.min(b);
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &c in &e_tilde {
            let r = find(&mut uf, c);
            groups.entry(r).or_default().push(c);
        }
        let classes = groups.into_values().collect();
        TwistClasses { normalizer, e_tilde, classes }
    }

    /// The map from split conjugates of `P` to twist classes, with checks.
    pub fn split_dictionary(&self, p: &Parabolic, twists: &TwistClasses) -> SplitDictionary {
        let w = &self.group;
        let x0 = &p.fixed_space;
        let nw_set: HashSet<usize> = twists.normalizer.elements.iter().copied().collect();
        let coset_index: HashMap<usize, usize> = twists
            .normalizer
            .cosets
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.iter().map(move |&x| (x, i)))
            .collect();
        let in_e: HashSet<usize> = twists.e_tilde.iter().copied().collect();
        let rows = par::map_range(w.order(), |x| {
            let flat = w.act_on_subspace(x, x0);
            let split = self.is_split_flat(&flat);
            let t = w.mul(w.inv(x), self.tau_conj[x]);
            let class = if nw_set.contains(&t) && in_e.contains(&coset_index[&t]) {
                twists.class_of(coset_index[&t])
            } else {
                None
            };
            (flat, split, class)
        });
        let mut criterion_holds = true;
        let mut well_defined = true;
        let mut map: BTreeMap<String, (Subspace, usize)> = BTreeMap::new();
        for (flat, split, class) in rows {
            if split != class.is_some() {
                criterion_holds = false;
            }
            if let Some(c) = class {
                let key = flat.key();
                match map.get(&key) {
                    Some((_, old)) if *old != c => well_defined = false,
                    Some(_) => {}
                    None => {
                        map.insert(key, (flat, c));
                    }
                }
            }
        }
        let entries: Vec<(Subspace, usize)> = map.into_values().collect();
        // W_tau-orbits on the split conjugates, using section images of generators
        let pos: HashMap<&Subspace, usize> = entries.iter().enumerate().map(|(i, (f, _))| (f, i)).collect();
        let mut uf: Vec<usize> = (0..entries.len()).collect();
        fn find(uf: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while uf[r] != r {
                r = uf[r];
            }
            uf[x] = r;
            r
        }
        for &g in self.w_tau.generators() {
            let s = self.section(g);
            for (i, (f, _)) in entries.iter().enumerate() {
                let img = w.act_on_subspace(s, f);
                match pos.get(&img) {
                    Some(&j) => {
                        let (a, b) = (find(&mut uf, i), find(&mut uf, j));
                        if a != b {
                            uf[a.max(b)] = a.min(b);
                        }
                    }
                    None => well_defined = false,
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..entries.len() {
            let r = find(&mut uf, i);
            groups.entry(r).or_default().push(i);
        }
        let orbits: Vec<Vec<usize>> = groups.into_values().collect();
        let mut orbit_class = Vec::new();
        for o in &orbits {
            let cs: BTreeSet<usize> = o.iter().map(|&i| entries[i].1).collect();
            if cs.len() != 1 {
                well_defined = false;
            }
            orbit_class.push(*cs.iter().next().unwrap_or(&usize::MAX));
        }
        let distinct: BTreeSet<usize> = orbit_class.iter().copied().collect();
        let bijective = well_defined
            && distinct.len() == orbit_class.len()
            && distinct.len() == twists.classes.len();
        SplitDictionary { entries, orbits, orbit_class, criterion_holds, well_defined, bijective }
    }

    /// Conjugation by `tau` fixes every element of `W_tau`.
    pub fn tau_acts_trivially_on_w_tau(&self) -> bool {
        self.setwise.iter().all(|&w| self.project(self.tau_conj[w]) == self.project(w))
    }

    /// Two points of `V^tau` are `W`-conjugate iff they are `W^set`-conjugate,
    /// checked on the given sample points.
    pub fn orbit_coincidence(&self, points: &[Vector]) -> bool {
        let w = &self.group;
        par::map(points, |v| {
            let full: BTreeSet<Vector> = (0..w.order())
                .map(|i| w.matrix(i).mul_vec(v))
                .filter(|u| self.v_tau.contains(u))
                .collect();
            let set: BTreeSet<Vector> = self.setwise.iter().map(|&i| w.matrix(i).mul_vec(v)).collect();
            full == set
        })
        .into_iter()
        .all(|b| b)
    }

    /// Sample points of `V^tau`: generic points of every trace `V^P cap V^tau`.
    pub fn sample_points(&self) -> Vec<Vector> {
        let alphas = self.group.alphas();
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for x in self.group.flats() {
            let y = self.group.flat_closure(&x.intersect(&self.v_tau));
            let y = y.intersect(&self.v_tau);
            if seen.insert(y.clone()) {
                out.push(y.generic_point(&alphas));
            }
        }
        out
    }

    /// A class has a split member iff some `w tau` meets the open stratum of
    /// its representative.
    pub fn class_split_consistent(&self, flats: &[Subspace]) -> bool {
        let has_split = flats.iter().any(|x| self.is_split_flat(x));
        let rep = &flats[0];
        let meets = (0..self.group.order()).any(|w| self.meets_open_stratum(rep, w));
        has_split == meets
    }

    /// The intersection of two split parabolics is split (checked on all pairs
    /// among the first `limit` split parabolics).
    pub fn intersections_split(&self, splits: &[SplitParabolic], limit: usize) -> bool {
        let s = &splits[..splits.len().min(limit)];
        let pairs: Vec<(usize, usize)> =
            (0..s.len()).flat_map(|i| (i + 1..s.len()).map(move |j| (i, j))).collect();
        par::map(&pairs, |&(i, j)| {
            let y = s[i].fixed_tau.sum(&s[j].fixed_tau);
            let x = self.group.flat_closure(&y);
            if !self.is_split_flat(&x) {
                return false;
            }
            let a: HashSet<usize> = s[i].parabolic.elements.iter().copied().collect();
            let inter: Vec<usize> = s[j].parabolic.elements.iter().copied().filter(|e| a.contains(e)).collect();
            self.group.pointwise_stabilizer(&x).elements == inter
        })
        .into_iter()
        .all(|b| b)
    }

    pub fn tau_inverse(&self) -> &Matrix {
        &self.tau_inv
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups;
    use crate::refgroup::default_cap;

    fn ctx(w: ReflectionGroup, tau: Matrix) -> TauContext {
        TauContext::build(Arc::new(w), tau, default_cap()).unwrap()
    }

    #[test]
    fn identity_gives_w() {
        let c = ctx(groups::b(2), Matrix::identity(2));
        assert!(c.is_full());
        assert!(c.is_regular());
        assert_eq!(c.w_tau().order(), 8);
        assert_eq!(c.split_parabolics().unwrap().len(), c.group().flats().len());
    }

    #[test]
    fn dihedral_s1() {
        for d in 3..=6 {
            let c = ctx(groups::dihedral(d), groups::dihedral_reflection(d, 1));
            assert_eq!(c.v_tau().dim(), 1);
            assert!(c.is_full());
            assert!(c.is_regular());
            assert!(c.hyperplane_traces_match());
        }
    }

    #[test]
    fn d4_with_t() {
        let t = groups::first_diag(4, &CycNum::from_int(-1));
        let c = ctx(groups::d(4), t);
        assert_eq!(c.w_tau().order(), 48);
        assert!(c.w_tau().is_generated_by_reflections());
        let splits = c.split_parabolics().unwrap();
        assert_eq!(splits.len(), c.w_tau().flats().len());
    }

    #[test]
    fn non_normalizing_is_rejected() {
        let w = groups::b(2);
        let m = Matrix::from_rows(vec![
            vec![CycNum::one(), CycNum::one()],
            vec![CycNum::zero(), CycNum::one()],
        ]);
        assert!(matches!(TauContext::build(Arc::new(w), m, 100), Err(Error::NotNormalizing)));
    }

    #[test]
    fn make_full_on_sign_group() {
        let w = groups::cyclic(2);
        let tau = Matrix::scalar(1, &CycNum::from_int(-1));
        assert!(make_full(&w, &tau).unwrap().is_identity());
    }

    #[test]
    fn rotation_made_full_in_dihedral4() {
        let w = groups::dihedral(4);
        let rot = groups::dihedral_reflection(4, 0).mul(&groups::dihedral_reflection(4, 1));
        let full = make_full(&w, &rot).unwrap();
        assert_eq!(full.fixed_space().dim(), 1);
    }

    #[test]
    fn zero_fixed_space() {
        let c = ctx(groups::cyclic(2), Matrix::scalar(1, &CycNum::root_of_unity(4, 1)));
        assert_eq!(c.v_tau().dim(), 0);
        assert!(!c.is_regular());
        assert_eq!(c.w_tau().order(), 1);
        let p = c.group().pointwise_stabilizer(&Subspace::whole(1));
        assert!(c.twist_classes(&p).classes.is_empty());
    }
}
