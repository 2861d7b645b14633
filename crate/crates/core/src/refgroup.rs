//! Finite complex reflection groups as explicit matrix groups.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use crate::error::{Error, Result};
use crate::exactnum::CycNum;
use crate::linalg::{normalize_first, vec_key, Matrix, Subspace, Vector};
use crate::par;

pub const DEFAULT_CAP: usize = 1_000_000;

/// Largest group for which a full multiplication table is kept.
const TABLE_LIMIT: usize = 2048;

static CAP_OVERRIDE: AtomicUsize = AtomicUsize::new(0);

/// Set the group-order cap for the rest of the process (0 clears it).
pub fn set_cap(cap: usize) {
    CAP_OVERRIDE.store(cap, AtomicOrdering::Relaxed);
}

/// The cap from [`set_cap`], else `LEAFATLAS_CAP`, else [`DEFAULT_CAP`].
pub fn default_cap() -> usize {
    let cap = CAP_OVERRIDE.load(AtomicOrdering::Relaxed);
    if cap > 0 {
        return cap;
    }
    std::env::var("LEAFATLAS_CAP")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_CAP)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub matrix: Matrix,
    pub key: String,
}

impl GroupElement {
    pub fn new(matrix: Matrix) -> Self {
        let key = matrix.key();
        GroupElement { matrix, key }
    }
}

#[derive(Clone, Debug)]
pub struct Hyperplane {
    /// Linear form with kernel `H`, first nonzero coordinate 1.
    pub alpha: Vector,
    /// Spans the stable complement of `H`, first nonzero coordinate 1.
    pub alpha_vee: Vector,
    pub e: usize,
    pub orbit: usize,
    /// Reflections with this hyperplane.
    pub reflections: Vec<usize>,
    /// The pointwise stabilizer `W_H` (identity and the reflections), sorted.
    pub pointwise: Vec<usize>,
}

/// Group algebra element as a map element index -> coefficient.
pub type GroupAlgebraElement = BTreeMap<usize, CycNum>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parabolic {
    pub elements: Vec<usize>,
    pub fixed_space: Subspace,
    pub witness: Vector,
}

impl Parabolic {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

#[derive(Clone, Debug)]
pub struct ParabolicClass {
    pub rep: Parabolic,
    /// Fixed spaces of all members of the class, sorted by key.
    pub flats: Vec<Subspace>,
}

#[derive(Clone, Debug)]
pub struct Normalizer {
    pub elements: Vec<usize>,
    /// Cosets of `P` in `N_W(P)`, each sorted; ordered by their minimal element.
    pub cosets: Vec<Vec<usize>>,
}

impl Normalizer {
    pub fn quotient_order(&self) -> usize {
        self.cosets.len()
    }

    pub fn reps(&self) -> Vec<usize> {
        self.cosets.iter().map(|c| c[0]).collect()
    }

    pub fn coset_of(&self, w: usize) -> Option<usize> {
        self.cosets.iter().position(|c| c.binary_search(&w).is_ok())
    }
}

pub struct ReflectionGroup {
    name: String,
    dim: usize,
    gens: Vec<usize>,
    elements: Vec<GroupElement>,
    index: HashMap<Matrix, usize>,
    table: Option<Vec<u32>>,
    inverse: Vec<usize>,
    det: Vec<CycNum>,
    words: Vec<Vec<usize>>,
    reflections: Vec<usize>,
    hyperplanes: Vec<Hyperplane>,
    refl_hyperplane: HashMap<usize, usize>,
    orbit_count: usize,
    generated_by_reflections: bool,
}

impl fmt::Debug for ReflectionGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ReflectionGroup({}, dim {}, order {})", self.name, self.dim, self.order())
    }
}

struct Closure {
    mats: Vec<Matrix>,
    words: Vec<Vec<usize>>,
    /// `(generator, parent)` with `element = gens[generator] * parent`.
    parent: Vec<Option<(usize, usize)>>,
    /// `left[g][x]` is the index of `gens[g] * x`.
    left: Vec<Vec<usize>>,
}

fn bfs_closure(dim: usize, gens: &[Matrix], cap: usize) -> Result<Closure> {
    let id = Matrix::identity(dim);
    let mut index: HashMap<Matrix, usize> = HashMap::new();
    index.insert(id.clone(), 0);
    let mut c = Closure {
        mats: vec![id],
        words: vec![Vec::new()],
        parent: vec![None],
        left: vec![Vec::new(); gens.len()],
    };
    let mut layer = vec![0usize];
    while !layer.is_empty() {
        let jobs: Vec<(usize, usize)> =
            layer.iter().flat_map(|&x| (0..gens.len()).map(move |g| (x, g))).collect();
        let mats = &c.mats;
        let prods = par::map(&jobs, |&(x, g)| gens[g].mul(&mats[x]));
        let mut next = Vec::new();
        for (&(x, g), p) in jobs.iter().zip(prods) {
            let idx = match index.get(&p) {
                Some(&i) => i,
                None => {
                    let i = c.mats.len();
                    if i >= cap {
                        return Err(Error::CapExceeded { cap });
                    }
                    index.insert(p.clone(), i);
                    c.mats.push(p);
                    let mut w = vec![g];
                    w.extend_from_slice(&c.words[x]);
                    c.words.push(w);
                    c.parent.push(Some((g, x)));
                    next.push(i);
                    i
                }
            };
            debug_assert_eq!(c.left[g].len(), x);
            c.left[g].push(idx);
        }
        layer = next;
    }
    Ok(c)
}

impl ReflectionGroup {
    /// Close the group generated by `generators` (all `dim x dim`).
    pub fn close(name: &str, dim: usize, generators: Vec<Matrix>, cap: usize) -> Result<Self> {
        for g in &generators {
            if g.rows() != dim || g.cols() != dim {
                return Err(Error::Invalid(format!("generator is not {dim}x{dim}")));
            }
            if g.det().is_zero() {
                return Err(Error::Invalid("generator is not invertible".into()));
            }
        }
        let closure = bfs_closure(dim, &generators, cap)?;
        Ok(Self::from_closure(name, dim, &generators, closure))
    }

    fn from_closure(name: &str, dim: usize, generators: &[Matrix], c: Closure) -> Self {
        let n = c.mats.len();
        let keys = par::map(&c.mats, |m| m.key());
        let mut order: Vec<usize> = (1..n).collect();
        order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
        order.insert(0, 0);
        let mut new_of = vec![0usize; n];
        for (new, &old) in order.iter().enumerate() {
            new_of[old] = new;
        }

        let table = if n <= TABLE_LIMIT {
            // left-multiplication permutations, composed along BFS parents
            let mut perms: Vec<Vec<u32>> = vec![Vec::new(); n];
            perms[0] = (0..n as u32).collect();
            for w in 1..n {
                let (g, p) = c.parent[w].unwrap();
                let lg = &c.left[g];
                perms[w] = perms[p].iter().map(|&x| lg[x as usize] as u32).collect();
            }
            let mut t = vec![0u32; n * n];
            for old_w in 0..n {
                let nw = new_of[old_w];
                for old_x in 0..n {
                    t[nw * n + new_of[old_x]] = new_of[perms[old_w][old_x] as usize] as u32;
                }
            }
            Some(t)
        } else {
            None
        };

        let mut mats: Vec<Option<Matrix>> = c.mats.into_iter().map(Some).collect();
        let mut keys: Vec<Option<String>> = keys.into_iter().map(Some).collect();
        let elements: Vec<GroupElement> = order
            .iter()
            .map(|&o| GroupElement { matrix: mats[o].take().unwrap(), key: keys[o].take().unwrap() })
            .collect();
        let words: Vec<Vec<usize>> = order.iter().map(|&o| c.words[o].clone()).collect();
        let index: HashMap<Matrix, usize> =
            elements.iter().enumerate().map(|(i, e)| (e.matrix.clone(), i)).collect();
        let gens: Vec<usize> = generators.iter().map(|g| index[g]).collect();

        let mut g = ReflectionGroup {
            name: name.to_string(),
            dim,
            gens,
            elements,
            index,
            table,
            inverse: Vec::new(),
            det: Vec::new(),
            words,
            reflections: Vec::new(),
            hyperplanes: Vec::new(),
            refl_hyperplane: HashMap::new(),
            orbit_count: 0,
            generated_by_reflections: false,
        };
        g.inverse = g.compute_inverses();
        g.det = par::map(&g.elements, |e| e.matrix.det());
        g.compute_reflection_data();
        g
    }

    /// Build a group from a complete element list; generators are chosen
    /// greedily among reflections, then among remaining elements.
    pub fn from_elements(name: &str, dim: usize, mats: Vec<Matrix>, cap: usize) -> Result<Self> {
        let mut uniq: Vec<Matrix> = Vec::new();
        let mut seen = HashSet::new();
        for m in mats {
            if seen.insert(m.clone()) {
                uniq.push(m);
            }
        }
        uniq.sort_by_cached_key(|m| m.key());
        let is_refl = |m: &Matrix| dim > 0 && m.minus_identity().rank() == 1;
        let mut gens: Vec<Matrix> = Vec::new();
        let mut covered: HashSet<Matrix> = HashSet::new();
        covered.insert(Matrix::identity(dim));
        let refls: Vec<&Matrix> = uniq.iter().filter(|m| is_refl(m)).collect();
        let others: Vec<&Matrix> = uniq.iter().filter(|m| !is_refl(m)).collect();
        for m in refls.into_iter().chain(others) {
            if !covered.contains(m) {
                gens.push(m.clone());
                covered = bfs_closure(dim, &gens, cap)?.mats.into_iter().collect();
            }
        }
        if covered.len() != seen.len() || !seen.iter().all(|m| covered.contains(m)) {
            return Err(Error::Invalid("element list is not closed under products".into()));
        }
        Self::close(name, dim, gens, cap)
    }

    pub fn trivial(dim: usize) -> Self {
        Self::close("trivial", dim, Vec::new(), 1).expect("trivial group")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: &str) {
        self.name = name.to_string();
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &GroupElement {
        &self.elements[i]
    }

    pub fn matrix(&self, i: usize) -> &Matrix {
        &self.elements[i].matrix
    }

    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn lookup(&self, m: &Matrix) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.order() + b] as usize,
            None => self.index[&self.matrix(a).mul(self.matrix(b))],
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn conj(&self, x: usize, a: usize) -> usize {
        self.mul(self.mul(x, a), self.inv(x))
    }

    pub fn det(&self, a: usize) -> &CycNum {
        &self.det[a]
    }

    /// Shortest word in the generators, as positions in [`Self::generators`].
    pub fn word(&self, a: usize) -> &[usize] {
        &self.words[a]
    }

    pub fn word_label(&self, a: usize) -> String {
        if a == 0 {
            "e".into()
        } else {
            self.words[a].iter().map(|g| format!("g{g}")).collect::<Vec<_>>().join(" ")
        }
    }

    pub fn element_from_word(&self, word: &[usize]) -> Result<usize> {
        let mut acc = 0;
        for &g in word {
            let gi = *self
                .gens
                .get(g)
                .ok_or_else(|| Error::Invalid(format!("generator index {g} out of range")))?;
            acc = self.mul(acc, gi);
        }
        Ok(acc)
    }

    fn compute_inverses(&self) -> Vec<usize> {
        let n = self.order();
        match &self.table {
            Some(t) => (0..n)
                .map(|a| (0..n).find(|&b| t[a * n + b] == 0).expect("group inverse"))
                .collect(),
            None => par::map(&self.elements, |e| {
                self.index[&e.matrix.inverse().expect("invertible element")]
            }),
        }
    }

    fn compute_reflection_data(&mut self) {
        let dim = self.dim;
        let refl_data = par::map_range(self.order(), |i| {
            if dim == 0 {
                return None;
            }
            let a = self.matrix(i).minus_identity();
            if a.rank() != 1 {
                return None;
            }
            let row = (0..dim).map(|r| a.row(r).to_vec()).find(|r| r.iter().any(|c| !c.is_zero()))?;
            let col = (0..dim).map(|c| a.col(c)).find(|c| c.iter().any(|x| !x.is_zero()))?;
            Some((normalize_first(&row), normalize_first(&col)))
        });
        let mut by_alpha: BTreeMap<String, (Vector, Vector, Vec<usize>)> = BTreeMap::new();
        for (i, d) in refl_data.into_iter().enumerate() {
            if let Some((alpha, vee)) = d {
                self.reflections.push(i);
                by_alpha.entry(vec_key(&alpha)).or_insert((alpha, vee, Vec::new())).2.push(i);
            }
        }
        let mut hyps: Vec<Hyperplane> = by_alpha
            .into_values()
            .map(|(alpha, alpha_vee, reflections)| {
                let mut pointwise = vec![0];
                pointwise.extend(&reflections);
                pointwise.sort_unstable();
                Hyperplane { alpha, alpha_vee, e: reflections.len() + 1, orbit: 0, reflections, pointwise }
            })
            .collect();
        let pos: HashMap<Vector, usize> = hyps.iter().enumerate().map(|(i, h)| (h.alpha.clone(), i)).collect();
        // orbits under the generators acting on covectors by alpha -> alpha M^{-1}
        let mut uf: Vec<usize> = (0..hyps.len()).collect();
        fn find(uf: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while uf[r] != r {
                r = uf[r];
            }
            uf[x] = r;
            r
        }
        for &g in &self.gens {
            let ginv = self.matrix(self.inverse[g]).clone();
            for (i, h) in hyps.iter().enumerate() {
                let img = normalize_first(&ginv.vec_mul(&h.alpha));
                let j = pos[&img];
                let (a, b) = (find(&mut uf, i), find(&mut uf, j));
                if a != b {
                    uf[a.max(b)] = a.min(b);
                }
            }
        }
        let mut orbit_ids: HashMap<usize, usize> = HashMap::new();
        for i in 0..hyps.len() {
            let r = find(&mut uf, i);
            let next = orbit_ids.len();
            let id = *orbit_ids.entry(r).or_insert(next);
            hyps[i].orbit = id;
        }
        self.orbit_count = orbit_ids.len();
        for (h, hyp) in hyps.iter().enumerate() {
            for &r in &hyp.reflections {
                self.refl_hyperplane.insert(r, h);
            }
        }
        self.hyperplanes = hyps;
        self.generated_by_reflections = self.subgroup_generated(&self.reflections).len() == self.order();
    }

    /// Subgroup generated by the given elements, sorted.
    pub fn subgroup_generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(g, x);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order()).filter(|&i| seen[i]).collect()
    }

    pub fn reflections(&self) -> &[usize] {
        &self.reflections
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn hyperplane_of(&self, reflection: usize) -> Option<usize> {
        self.refl_hyperplane.get(&reflection).copied()
    }

    pub fn orbit_count(&self) -> usize {
        self.orbit_count
    }

    /// `e` shared by the hyperplanes of an orbit.
    pub fn orbit_e(&self, orbit: usize) -> usize {
        self.hyperplanes.iter().find(|h| h.orbit == orbit).map_or(1, |h| h.e)
    }

    pub fn is_generated_by_reflections(&self) -> bool {
        self.generated_by_reflections
    }

    pub fn alphas(&self) -> Vec<Vector> {
        self.hyperplanes.iter().map(|h| h.alpha.clone()).collect()
    }

    /// `(1/e_H) sum_{w in W_H} det(w)^j w`.
    pub fn idempotent(&self, h: usize, j: usize) -> GroupAlgebraElement {
        let hyp = &self.hyperplanes[h];
        let inv_e = CycNum::from_rat(crate::exactnum::rat(1, hyp.e as i64));
        hyp.pointwise
            .iter()
            .map(|&w| (w, &self.det(w).pow(j as u32) * &inv_e))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    pub fn algebra_mul(&self, a: &GroupAlgebraElement, b: &GroupAlgebraElement) -> GroupAlgebraElement {
        let mut out = GroupAlgebraElement::new();
        for (&x, cx) in a {
            for (&y, cy) in b {
                let e = out.entry(self.mul(x, y)).or_insert_with(CycNum::zero);
                *e = &*e + &(cx * cy);
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    // ---- parabolic subgroups ----

    /// Smallest intersection of reflecting hyperplanes containing `s`.
    pub fn flat_closure(&self, s: &Subspace) -> Subspace {
        let eqs: Vec<Vector> = self
            .hyperplanes
            .iter()
            .filter(|h| s.annihilated_by(&h.alpha))
            .map(|h| h.alpha.clone())
            .collect();
        Subspace::kernel_of(self.dim, eqs)
    }

    /// Common fixed space of a set of elements.
    pub fn fixed_space_of(&self, elems: &[usize]) -> Subspace {
        let mut rows: Vec<Vector> = Vec::new();
        for &w in elems {
            if w == 0 {
                continue;
            }
            rows.extend(self.matrix(w).minus_identity().row_vecs());
            // keep the system small
            if rows.len() > 4 * self.dim {
                rows = crate::linalg::rref(rows, self.dim).0;
            }
        }
        Subspace::kernel_of(self.dim, rows)
    }

    fn parabolic_from(&self, elements: Vec<usize>) -> Parabolic {
        let fixed_space = self.fixed_space_of(&elements);
        let witness = fixed_space.generic_point(&self.alphas());
        Parabolic { elements, fixed_space, witness }
    }

    pub fn stabilizer(&self, v: &[CycNum]) -> Parabolic {
        let elements = par::filter_range(self.order(), |w| self.matrix(w).mul_vec(v) == v);
        self.parabolic_from(elements)
    }

    pub fn pointwise_stabilizer(&self, s: &Subspace) -> Parabolic {
        let elements = par::filter_range(self.order(), |w| {
            let m = self.matrix(w);
            s.basis().iter().all(|b| &m.mul_vec(b) == b)
        });
        self.parabolic_from(elements)
    }

    pub fn setwise_stabilizer(&self, s: &Subspace) -> Vec<usize> {
        par::filter_range(self.order(), |w| {
            let m = self.matrix(w);
            s.basis().iter().all(|b| s.contains(&m.mul_vec(b)))
        })
    }

    /// All intersections of reflecting hyperplanes (including `V`), ordered by
    /// dimension descending then key.
    pub fn flats(&self) -> Vec<Subspace> {
        let whole = Subspace::whole(self.dim);
        let mut seen: HashSet<Subspace> = HashSet::from([whole.clone()]);
        let mut layer = vec![whole];
        let alphas = self.alphas();
        while !layer.is_empty() {
            let cuts = par::map(&layer, |x| {
                alphas
                    .iter()
                    .filter(|a| !x.annihilated_by(a))
                    .map(|a| x.intersect(&Subspace::kernel_of(self.dim, vec![a.clone()])))
                    .collect::<Vec<_>>()
            });
            let mut next = Vec::new();
            for y in cuts.into_iter().flatten() {
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
            layer = next;
        }
        let mut out: Vec<Subspace> = seen.into_iter().collect();
        sort_flats(&mut out);
        out
    }

    pub fn act_on_subspace(&self, w: usize, s: &Subspace) -> Subspace {
        s.image(self.matrix(w))
    }

    /// W-orbits of flats, each sorted; orbits ordered by their first member.
    pub fn flat_orbits(&self, flats: &[Subspace]) -> Vec<Vec<Subspace>> {
        let pos: HashMap<&Subspace, usize> = flats.iter().enumerate().map(|(i, f)| (f, i)).collect();
        let mut uf: Vec<usize> = (0..flats.len()).collect();
        fn find(uf: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while uf[r] != r {
                r = uf[r];
            }
            uf[x] = r;
            r
        }
        for &g in &self.gens {
            let images = par::map(flats, |f| self.act_on_subspace(g, f));
            for (i, img) in images.iter().enumerate() {
                let j = pos[img];
                let (a, b) = (find(&mut uf, i), find(&mut uf, j));
                if a != b {
                    uf[a.max(b)] = a.min(b);
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<Subspace>> = BTreeMap::new();
        for i in 0..flats.len() {
            let r = find(&mut uf, i);
            groups.entry(r).or_default().push(flats[i].clone());
        }
        let mut out: Vec<Vec<Subspace>> = groups.into_values().collect();
        for o in out.iter_mut() {
            sort_flats(o);
        }
        out.sort_by(|a, b| flat_order(&a[0], &b[0]));
        out
    }

    /// One representative per conjugacy class of parabolic subgroups, ordered
    /// by (dim V^P descending, key of V^P).
    pub fn parabolic_classes(&self) -> Vec<ParabolicClass> {
        let flats = self.flats();
        let orbits = self.flat_orbits(&flats);
        let reps = par::map(&orbits, |o| self.pointwise_stabilizer(&o[0]));
        orbits
            .into_iter()
            .zip(reps)
            .map(|(flats, rep)| ParabolicClass { rep, flats })
            .collect()
    }

    /// Every parabolic subgroup, one per flat, in flat order.
    pub fn all_parabolics(&self) -> Vec<Parabolic> {
        let flats = self.flats();
        par::map(&flats, |f| self.pointwise_stabilizer(f))
    }

    pub fn normalizer(&self, p: &Parabolic) -> Normalizer {
        let elements = self.setwise_stabilizer(&p.fixed_space);
        let cosets = self.cosets(&elements, &p.elements);
        Normalizer { elements, cosets }
    }

    /// Left cosets `xP` inside `n`, ordered by minimal element.
    pub fn cosets(&self, n: &[usize], p: &[usize]) -> Vec<Vec<usize>> {
        let mut covered = HashSet::new();
        let mut out = Vec::new();
        for &x in n {
            if covered.contains(&x) {
                continue;
            }
            let mut c: Vec<usize> = p.iter().map(|&q| self.mul(x, q)).collect();
            c.sort_unstable();
            covered.extend(c.iter().copied());
            out.push(c);
        }
        out
    }

    /// Does `w` stabilize the subgroup (as a set) under conjugation?
    pub fn normalizes(&self, w: usize, sub: &[usize]) -> bool {
        let set: HashSet<usize> = sub.iter().copied().collect();
        sub.iter().all(|&p| set.contains(&self.conj(w, p)))
    }

    /// Action of `w` on `V*` as a row-vector map: `f -> f M^{-1}`.
    pub fn dual_matrix(&self, w: usize) -> Matrix {
        self.matrix(self.inv(w)).clone()
    }
}

pub fn flat_order(a: &Subspace, b: &Subspace) -> std::cmp::Ordering {
    b.dim().cmp(&a.dim()).then_with(|| a.key().cmp(&b.key()))
}

pub fn sort_flats(v: &mut [Subspace]) {
    v.sort_by_cached_key(|s| (std::cmp::Reverse(s.dim()), s.key()));
}

/// Parameter `k`: one value per (hyperplane orbit, residue mod e).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParameterK {
    values: Vec<Vec<CycNum>>,
}

impl ParameterK {
    pub fn zero(w: &ReflectionGroup) -> Self {
        ParameterK {
            values: (0..w.orbit_count()).map(|o| vec![CycNum::zero(); w.orbit_e(o)]).collect(),
        }
    }

    pub fn new(w: &ReflectionGroup, values: Vec<Vec<CycNum>>) -> Result<Self> {
        if values.len() < w.orbit_count() {
            return Err(Error::MissingOrbit(values.len()));
        }
        for (o, v) in values.iter().enumerate().take(w.orbit_count()) {
            if v.len() != w.orbit_e(o) {
                return Err(Error::Invalid(format!(
                    "orbit {o} needs {} values, got {}",
                    w.orbit_e(o),
                    v.len()
                )));
            }
        }
        if values.len() > w.orbit_count() {
            return Err(Error::Invalid(format!(
                "{} orbits given, group has {}",
                values.len(),
                w.orbit_count()
            )));
        }
        Ok(ParameterK { values })
    }

    /// Same values for every orbit (each orbit must have `values.len()` residues).
    pub fn uniform(w: &ReflectionGroup, values: &[CycNum]) -> Result<Self> {
        Self::new(w, vec![values.to_vec(); w.orbit_count()])
    }

    pub fn get(&self, orbit: usize, j: i64) -> &CycNum {
        let v = &self.values[orbit];
        &v[j.rem_euclid(v.len() as i64) as usize]
    }

    pub fn values(&self) -> &[Vec<CycNum>] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().flatten().all(CycNum::is_zero)
    }

    pub fn scaled(&self, c: &CycNum) -> Self {
        ParameterK { values: self.values.iter().map(|v| v.iter().map(|x| x * c).collect()).collect() }
    }

    /// Add `shift[orbit]` to every residue of that orbit.
    pub fn shifted(&self, shift: &[CycNum]) -> Self {
        ParameterK {
            values: self
                .values
                .iter()
                .zip(shift)
                .map(|(v, s)| v.iter().map(|x| x + s).collect())
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups;

    #[test]
    fn sign_group() {
        let w = ReflectionGroup::close("mu2", 1, vec![Matrix::scalar(1, &CycNum::from_int(-1))], 10).unwrap();
        assert_eq!(w.order(), 2);
        assert_eq!(w.reflections().len(), 1);
        assert_eq!(w.hyperplanes()[0].e, 2);
    }

    #[test]
    fn cap_is_enforced() {
        let two = Matrix::scalar(1, &CycNum::from_int(2));
        assert_eq!(ReflectionGroup::close("inf", 1, vec![two], 50).unwrap_err(), Error::CapExceeded { cap: 50 });
    }

    #[test]
    fn trivial_group_has_no_reflections() {
        let w = ReflectionGroup::trivial(2);
        assert_eq!(w.order(), 1);
        assert!(w.reflections().is_empty());
        assert_eq!(w.parabolic_classes().len(), 1);
        let w0 = ReflectionGroup::trivial(0);
        assert_eq!(w0.order(), 1);
        assert_eq!(w0.flats().len(), 1);
    }

    #[test]
    fn idempotents_for_e2() {
        let w = groups::cyclic(2);
        let e0 = w.idempotent(0, 0);
        let e1 = w.idempotent(0, 1);
        let half = CycNum::from_rat(crate::exactnum::rat(1, 2));
        assert_eq!(e0, BTreeMap::from([(0, half.clone()), (1, half.clone())]));
        assert_eq!(e1, BTreeMap::from([(0, half.clone()), (1, -&half)]));
        assert_eq!(w.algebra_mul(&e0, &e0), e0);
        assert!(w.algebra_mul(&e0, &e1).is_empty());
    }

    #[test]
    fn b2_data() {
        let w = groups::b(2);
        assert_eq!(w.order(), 8);
        assert_eq!(w.reflections().len(), 4);
        assert_eq!(w.orbit_count(), 2);
        let v = vec![CycNum::zero(), CycNum::one()];
        let p = w.stabilizer(&v);
        assert_eq!(p.order(), 2);
        assert_eq!(w.stabilizer(&[CycNum::zero(), CycNum::zero()]).order(), 8);
        assert_eq!(w.parabolic_classes().len(), 4);
    }

    #[test]
    fn mult_table_agrees_with_matrices() {
        let w = groups::b(3);
        for a in (0..w.order()).step_by(5) {
            for b in (0..w.order()).step_by(7) {
                let m = w.matrix(a).mul(w.matrix(b));
                assert_eq!(w.lookup(&m), Some(w.mul(a, b)));
            }
            assert_eq!(w.mul(a, w.inv(a)), 0);
        }
    }

    #[test]
    fn words_evaluate_to_elements() {
        let w = groups::dihedral(5);
        for a in 0..w.order() {
            assert_eq!(w.element_from_word(w.word(a)).unwrap(), a);
        }
    }
}
