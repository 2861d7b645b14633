//! Symbolic rational Cherednik algebras in PBW normal form `x^a * w * y^b`.
//!
//! Coefficients are polynomials in two formal scalars, `t` and `h` (the Rees
//! parameter), with cyclotomic coefficients. Three commutation rules are
//! supported:
//!
//! * [`Mode::TDeform`]: `[y, x] = t <y, x> + S_k(y, x)`
//! * [`Mode::HbarDeform`]: `[y, x] = h^2 S_k(y, x)`
//! * [`Mode::TZero`]: `[y, x] = S_k(y, x)`
//!
//! where `S_k(y, x) = sum_H sum_j e_H (k_{H,j} - k_{H,j+1}) <y, a_H> <a_H^v, x> / <a_H^v, a_H> eps_{H,j}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::exactnum::{rat, CycNum};
use crate::linalg::{dot, nullspace, rref, Matrix, Vector};
use crate::par;
use crate::refgroup::{GroupAlgebraElement, ParameterK, ReflectionGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    TDeform,
    HbarDeform,
    TZero,
}

/// Polynomial in `t` and `h`, keyed by `(deg_t, deg_h)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coeff(BTreeMap<(u32, u32), CycNum>);

impl Coeff {
    pub fn zero() -> Self {
        Coeff(BTreeMap::new())
    }

    pub fn constant(c: CycNum) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn one() -> Self {
        Self::constant(CycNum::one())
    }

    pub fn monomial(t: u32, h: u32, c: CycNum) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert((t, h), c);
        }
        Coeff(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &CycNum)> {
        self.0.iter()
    }

    pub fn add_assign(&mut self, other: &Coeff) {
        for (k, v) in &other.0 {
            self.add_term(*k, v);
        }
    }

    fn add_term(&mut self, k: (u32, u32), v: &CycNum) {
        let e = self.0.entry(k).or_insert_with(CycNum::zero);
        *e = &*e + v;
        if e.is_zero() {
            self.0.remove(&k);
        }
    }

    pub fn mul(&self, other: &Coeff) -> Coeff {
        let mut out = Coeff::zero();
        for ((t1, h1), a) in &self.0 {
            for ((t2, h2), b) in &other.0 {
                out.add_term((t1 + t2, h1 + h2), &(a * b));
            }
        }
        out
    }

    pub fn scale(&self, c: &CycNum) -> Coeff {
        if c.is_zero() {
            return Coeff::zero();
        }
        Coeff(self.0.iter().map(|(k, v)| (*k, v * c)).collect())
    }

    pub fn neg(&self) -> Coeff {
        self.scale(&CycNum::from_int(-1))
    }

    /// Substitute values for `t` and `h`.
    pub fn eval(&self, t: Option<&CycNum>, h: Option<&CycNum>) -> Coeff {
        let mut out = Coeff::zero();
        for ((td, hd), c) in &self.0 {
            let mut c = c.clone();
            let mut key = (*td, *hd);
            if let Some(t) = t {
                c = &c * &t.pow(*td);
                key.0 = 0;
            }
            if let Some(h) = h {
                c = &c * &h.pow(*hd);
                key.1 = 0;
            }
            out.add_term(key, &c);
        }
        out
    }

    pub fn max_t_degree(&self) -> Option<u32> {
        self.0.keys().map(|k| k.0).max()
    }

    pub fn min_t_degree(&self) -> Option<u32> {
        self.0.keys().map(|k| k.0).min()
    }

    fn shift_t(&self, down: u32) -> Coeff {
        Coeff(self.0.iter().map(|((t, h), v)| ((t - down, *h), v.clone())).collect())
    }

    pub fn constant_term(&self) -> CycNum {
        self.0.get(&(0, 0)).cloned().unwrap_or_else(CycNum::zero)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CherMonomial {
    pub x: Vec<u32>,
    pub w: usize,
    pub y: Vec<u32>,
}

impl CherMonomial {
    pub fn x_degree(&self) -> u32 {
        self.x.iter().sum()
    }

    pub fn y_degree(&self) -> u32 {
        self.y.iter().sum()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CherElement {
    terms: BTreeMap<CherMonomial, Coeff>,
}

impl CherElement {
    pub fn zero() -> Self {
        CherElement { terms: BTreeMap::new() }
    }

    pub fn from_monomial(m: CherMonomial, c: Coeff) -> Self {
        let mut e = Self::zero();
        e.add_term(m, &c);
        e
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CherMonomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: CherMonomial, c: &Coeff) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_default();
        e.add_assign(c);
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &CherElement) -> CherElement {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &CherElement) -> CherElement {
        self.add(&other.scale(&CycNum::from_int(-1)))
    }

    pub fn scale(&self, c: &CycNum) -> CherElement {
        self.scale_coeff(&Coeff::constant(c.clone()))
    }

    pub fn scale_coeff(&self, c: &Coeff) -> CherElement {
        let mut out = CherElement::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), &v.mul(c));
        }
        out
    }

    pub fn coeff(&self, m: &CherMonomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Common `Z`-degree `sum a - sum b`, or `None` if inhomogeneous.
    /// The zero element has degree 0.
    pub fn euler_degree(&self) -> Option<i64> {
        let mut degs = self.terms.keys().map(|m| m.x_degree() as i64 - m.y_degree() as i64);
        let first = degs.next().unwrap_or(0);
        degs.all(|d| d == first).then_some(first)
    }

    /// Maximal `sum a + sum b`; `None` for zero.
    pub fn filtration_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.x_degree() + m.y_degree()).max()
    }

    /// Terms of filtration degree exactly `d`, with `t` set to 0.
    pub fn graded_part(&self, d: u32) -> CherElement {
        let zero = CycNum::zero();
        let mut out = CherElement::zero();
        for (m, c) in &self.terms {
            if m.x_degree() + m.y_degree() == d {
                out.add_term(m.clone(), &c.eval(Some(&zero), None));
            }
        }
        out
    }

    /// Leading part for the filtration, with `t = 0`.
    pub fn associated_graded_leading(&self) -> CherElement {
        match self.filtration_degree() {
            None => CherElement::zero(),
            Some(d) => self.graded_part(d),
        }
    }

    pub fn eval(&self, t: Option<&CycNum>, h: Option<&CycNum>) -> CherElement {
        let mut out = CherElement::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &c.eval(t, h));
        }
        out
    }

    /// The map `x -> h x`, `y -> h y`, `w -> w` on normal-ordered monomials.
    pub fn theta(&self) -> CherElement {
        let mut out = CherElement::zero();
        for (m, c) in &self.terms {
            let d = m.x_degree() + m.y_degree();
            out.add_term(m.clone(), &c.mul(&Coeff::monomial(0, d, CycNum::one())));
        }
        out
    }

    pub fn is_t_free(&self) -> bool {
        self.terms.values().all(|c| c.max_t_degree().unwrap_or(0) == 0)
    }
}

type XPoly = BTreeMap<Vec<u32>, CycNum>;

fn poly_mul(a: &XPoly, b: &XPoly) -> XPoly {
    let mut out = XPoly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m: Vec<u32> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            let e = out.entry(m).or_insert_with(CycNum::zero);
            *e = &*e + &(ca * cb);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn unit(n: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

type Cache<K, V> = Mutex<HashMap<K, Arc<V>>>;

pub struct Cherednik {
    group: Arc<ReflectionGroup>,
    k: ParameterK,
    mode: Mode,
    /// `[y_i, x_j]` as a group algebra element with polynomial coefficients.
    comm: Vec<Vec<Vec<(usize, Coeff)>>>,
    /// `inv_mats[w] = M_w^{-1}`.
    inv_mats: Vec<Matrix>,
    act_x_cache: Cache<(usize, Vec<u32>), XPoly>,
    act_y_cache: Cache<(usize, Vec<u32>), XPoly>,
    bracket_cache: Cache<(usize, Vec<u32>), Vec<(Vec<u32>, usize, Coeff)>>,
    nf_cache: Cache<(Vec<u32>, Vec<u32>), CherElement>,
}

impl Cherednik {
    pub fn new(group: Arc<ReflectionGroup>, k: ParameterK, mode: Mode) -> Result<Self> {
        if k.values().len() != group.orbit_count() {
            return Err(Error::MissingOrbit(k.values().len().min(group.orbit_count())));
        }
        let n = group.dim();
        let hyp_terms: Vec<(Vector, Vector, CycNum, GroupAlgebraElement)> = group
            .hyperplanes()
            .iter()
            .enumerate()
            .map(|(hi, h)| {
                let mut gamma = GroupAlgebraElement::new();
                for j in 0..h.e {
                    let diff = k.get(h.orbit, j as i64) - k.get(h.orbit, j as i64 + 1);
                    let c = &CycNum::from_int(h.e as i64) * &diff;
                    if c.is_zero() {
                        continue;
                    }
                    for (w, v) in group.idempotent(hi, j) {
                        let e = gamma.entry(w).or_insert_with(CycNum::zero);
                        *e = &*e + &(&c * &v);
                    }
                }
                gamma.retain(|_, c| !c.is_zero());
                let pairing = dot(&h.alpha_vee, &h.alpha);
                (h.alpha.clone(), h.alpha_vee.clone(), pairing, gamma)
            })
            .collect();
        let factor = match mode {
            Mode::HbarDeform => Coeff::monomial(0, 2, CycNum::one()),
            _ => Coeff::one(),
        };
        let mut comm = vec![vec![Vec::new(); n]; n];
        for (i, row) in comm.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let mut acc: BTreeMap<usize, Coeff> = BTreeMap::new();
                if mode == Mode::TDeform && i == j {
                    acc.entry(0).or_default().add_assign(&Coeff::monomial(1, 0, CycNum::one()));
                }
                for (alpha, vee, pairing, gamma) in &hyp_terms {
                    let c = &alpha[i] * &vee[j];
                    if c.is_zero() {
                        continue;
                    }
                    let c = c.try_div(pairing)?;
                    for (w, v) in gamma {
                        acc.entry(*w).or_default().add_assign(&factor.scale(&(&c * v)));
                    }
                }
                *cell = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            }
        }
        let inv_mats = (0..group.order()).map(|w| group.matrix(group.inv(w)).clone()).collect();
        Ok(Cherednik {
            group,
            k,
            mode,
            comm,
            inv_mats,
            act_x_cache: Mutex::new(HashMap::new()),
            act_y_cache: Mutex::new(HashMap::new()),
            bracket_cache: Mutex::new(HashMap::new()),
            nf_cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn with_mode(&self, mode: Mode) -> Result<Self> {
        Cherednik::new(self.group.clone(), self.k.clone(), mode)
    }

    pub fn with_k(&self, k: ParameterK) -> Result<Self> {
        Cherednik::new(self.group.clone(), k, self.mode)
    }

    pub fn group(&self) -> &ReflectionGroup {
        &self.group
    }

    pub fn k(&self) -> &ParameterK {
        &self.k
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.group.dim()
    }

    // ---- constructors ----

    pub fn one(&self) -> CherElement {
        self.group_element(0)
    }

    pub fn scalar(&self, c: Coeff) -> CherElement {
        CherElement::from_monomial(self.mono(vec![0; self.dim()], 0, vec![0; self.dim()]), c)
    }

    fn mono(&self, x: Vec<u32>, w: usize, y: Vec<u32>) -> CherMonomial {
        CherMonomial { x, w, y }
    }

    pub fn monomial(&self, x: Vec<u32>, w: usize, y: Vec<u32>) -> CherElement {
        CherElement::from_monomial(self.mono(x, w, y), Coeff::one())
    }

    pub fn x(&self, i: usize) -> CherElement {
        self.monomial(unit(self.dim(), i), 0, vec![0; self.dim()])
    }

    pub fn y(&self, i: usize) -> CherElement {
        self.monomial(vec![0; self.dim()], 0, unit(self.dim(), i))
    }

    pub fn group_element(&self, w: usize) -> CherElement {
        self.monomial(vec![0; self.dim()], w, vec![0; self.dim()])
    }

    pub fn group_algebra(&self, a: &GroupAlgebraElement) -> CherElement {
        let mut out = CherElement::zero();
        for (w, c) in a {
            out = out.add(&self.group_element(*w).scale(c));
        }
        out
    }

    /// The linear form `sum c_i x_i`.
    pub fn x_linear(&self, c: &[CycNum]) -> CherElement {
        let mut out = CherElement::zero();
        for (i, ci) in c.iter().enumerate() {
            out = out.add(&self.x(i).scale(ci));
        }
        out
    }

    pub fn y_linear(&self, c: &[CycNum]) -> CherElement {
        let mut out = CherElement::zero();
        for (i, ci) in c.iter().enumerate() {
            out = out.add(&self.y(i).scale(ci));
        }
        out
    }

    /// `[y_i, x_j]` as given by the defining relation.
    pub fn relation(&self, i: usize, j: usize) -> CherElement {
        let mut out = CherElement::zero();
        for (w, c) in &self.comm[i][j] {
            out.add_term(self.mono(vec![0; self.dim()], *w, vec![0; self.dim()]), c);
        }
        out
    }

    // ---- group actions on polynomial parts ----

    /// `w . x^a`, using `w . x_j = sum_i (M^-1)_{ji} x_i`.
    fn act_x(&self, w: usize, a: &[u32]) -> Arc<XPoly> {
        let key = (w, a.to_vec());
        if let Some(p) = self.act_x_cache.lock().unwrap().get(&key) {
            return p.clone();
        }
        let n = self.dim();
        let m = &self.inv_mats[w];
        let p = self.act_generic(a, |j| (0..n).map(|i| m.get(j, i).clone()).collect());
        let p = Arc::new(p);
        self.act_x_cache.lock().unwrap().insert(key, p.clone());
        p
    }

    /// `w . y^b`, using `w . y_j = sum_i M_{ij} y_i`.
    fn act_y(&self, w: usize, b: &[u32]) -> Arc<XPoly> {
        let key = (w, b.to_vec());
        if let Some(p) = self.act_y_cache.lock().unwrap().get(&key) {
            return p.clone();
        }
        let n = self.dim();
        let m = self.group.matrix(w);
        let p = self.act_generic(b, |j| (0..n).map(|i| m.get(i, j).clone()).collect());
        let p = Arc::new(p);
        self.act_y_cache.lock().unwrap().insert(key, p.clone());
        p
    }

    fn act_generic(&self, a: &[u32], image: impl Fn(usize) -> Vec<CycNum>) -> XPoly {
        let n = self.dim();
        let mut acc: XPoly = XPoly::from([(vec![0; n], CycNum::one())]);
        for (j, &e) in a.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let lin: XPoly = image(j)
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (unit(n, i), c))
                .collect();
            for _ in 0..e {
                acc = poly_mul(&acc, &lin);
            }
        }
        acc
    }

    /// `[y_i, x^a]` as a list of `(x-exponent, group element, coefficient)`.
    fn bracket_y_xpow(&self, i: usize, a: &[u32]) -> Arc<Vec<(Vec<u32>, usize, Coeff)>> {
        let key = (i, a.to_vec());
        if let Some(r) = self.bracket_cache.lock().unwrap().get(&key) {
            return r.clone();
        }
        let n = self.dim();
        // x^a as a sorted letter sequence
        let letters: Vec<usize> = a.iter().enumerate().flat_map(|(j, &e)| std::iter::repeat_n(j, e as usize)).collect();
        let mut acc: BTreeMap<(Vec<u32>, usize), Coeff> = BTreeMap::new();
        for l in 0..letters.len() {
            let mut prefix = vec![0u32; n];
            for &j in &letters[..l] {
                prefix[j] += 1;
            }
            let mut suffix = vec![0u32; n];
            for &j in &letters[l + 1..] {
                suffix[j] += 1;
            }
            for (g, c) in &self.comm[i][letters[l]] {
                let moved = self.act_x(*g, &suffix);
                for (m, mc) in moved.iter() {
                    let xe: Vec<u32> = m.iter().zip(&prefix).map(|(p, q)| p + q).collect();
                    acc.entry((xe, *g)).or_default().add_assign(&c.scale(mc));
                }
            }
        }
        let out: Vec<(Vec<u32>, usize, Coeff)> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|((x, g), c)| (x, g, c)).collect();
        let out = Arc::new(out);
        self.bracket_cache.lock().unwrap().insert(key, out.clone());
        out
    }

    /// Normal form of `y^b x^c`.
    fn nf_yx(&self, b: &[u32], c: &[u32]) -> Arc<CherElement> {
        let n = self.dim();
        if b.iter().all(|&e| e == 0) || c.iter().all(|&e| e == 0) {
            return Arc::new(self.monomial(c.to_vec(), 0, b.to_vec()));
        }
        let key = (b.to_vec(), c.to_vec());
        if let Some(r) = self.nf_cache.lock().unwrap().get(&key) {
            return r.clone();
        }
        let i = b.iter().position(|&e| e > 0).unwrap();
        let mut rest = b.to_vec();
        rest[i] -= 1;
        let inner = self.nf_yx(&rest, c);
        let mut out = CherElement::zero();
        for (m, coef) in inner.terms() {
            // y_i x^a v y^d = x^a v (v^-1 . y_i) y^d + [y_i, x^a] v y^d
            let vinv = self.group.inv(m.w);
            for (ye, yc) in self.act_y(vinv, &unit(n, i)).iter() {
                let y: Vec<u32> = ye.iter().zip(&m.y).map(|(p, q)| p + q).collect();
                out.add_term(self.mono(m.x.clone(), m.w, y), &coef.scale(yc));
            }
            for (xe, g, bc) in self.bracket_y_xpow(i, &m.x).iter() {
                let w = self.group.mul(*g, m.w);
                out.add_term(self.mono(xe.clone(), w, m.y.clone()), &coef.mul(bc));
            }
        }
        let out = Arc::new(out);
        self.nf_cache.lock().unwrap().insert(key, out.clone());
        out
    }

    fn mul_monomials(&self, m1: &CherMonomial, m2: &CherMonomial, out: &mut CherElement, coef: &Coeff) {
        // x^a w (y^b x^c) u y^d
        let inner = self.nf_yx(&m1.y, &m2.x);
        let uinv = self.group.inv(m2.w);
        for (m, c) in inner.terms() {
            let c = c.mul(coef);
            let xs = self.act_x(m1.w, &m.x);
            let ys = self.act_y(uinv, &m.y);
            let g = self.group.mul(self.group.mul(m1.w, m.w), m2.w);
            for (xe, xc) in xs.iter() {
                let x: Vec<u32> = xe.iter().zip(&m1.x).map(|(p, q)| p + q).collect();
                let cx = c.scale(xc);
                for (ye, yc) in ys.iter() {
                    let y: Vec<u32> = ye.iter().zip(&m2.y).map(|(p, q)| p + q).collect();
                    out.add_term(self.mono(x.clone(), g, y), &cx.scale(yc));
                }
            }
        }
    }

    pub fn multiply(&self, a: &CherElement, b: &CherElement) -> CherElement {
        let mut out = CherElement::zero();
        for (m1, c1) in a.terms() {
            for (m2, c2) in b.terms() {
                self.mul_monomials(m1, m2, &mut out, &c1.mul(c2));
            }
        }
        out
    }

    pub fn product(&self, factors: &[CherElement]) -> CherElement {
        factors.iter().fold(self.one(), |acc, f| self.multiply(&acc, f))
    }

    pub fn commutator(&self, a: &CherElement, b: &CherElement) -> CherElement {
        self.multiply(a, b).sub(&self.multiply(b, a))
    }

    /// Multiply many pairs, in parallel when enabled; output order follows input.
    pub fn multiply_batch(&self, pairs: &[(CherElement, CherElement)]) -> Vec<CherElement> {
        par::map(pairs, |(a, b)| self.multiply(a, b))
    }

    pub fn power(&self, a: &CherElement, e: u32) -> CherElement {
        (0..e).fold(self.one(), |acc, _| self.multiply(&acc, a))
    }

    // ---- centrality and Poisson structure ----

    fn generators_for_center(&self) -> Vec<CherElement> {
        let mut gens: Vec<CherElement> = (0..self.dim()).map(|i| self.x(i)).collect();
        gens.extend((0..self.dim()).map(|i| self.y(i)));
        gens.extend(self.group.generators().iter().map(|&g| self.group_element(g)));
        gens
    }

    /// Commutes with every `x_i`, `y_i` and every generator of `W`.
    pub fn is_central(&self, e: &CherElement) -> bool {
        self.generators_for_center().iter().all(|g| self.commutator(g, e).is_zero())
    }

    /// `lim_{t -> 0} [z1, z2] / t`, computed in the `t`-deformed algebra.
    pub fn poisson_bracket(&self, z1: &CherElement, z2: &CherElement) -> Result<CherElement> {
        let tdef = if self.mode == Mode::TDeform { None } else { Some(self.with_mode(Mode::TDeform)?) };
        let eng = tdef.as_ref().unwrap_or(self);
        let c = eng.commutator(z1, z2);
        let mut out = CherElement::zero();
        for (m, coef) in c.terms() {
            if coef.min_t_degree().unwrap_or(1) == 0 {
                return Err(Error::NotPoissonCompatible);
            }
            let divided = coef.shift_t(1);
            let at_zero = divided.eval(Some(&CycNum::zero()), None);
            out.add_term(m.clone(), &at_zero);
        }
        Ok(out)
    }

    /// All normal-ordered monomials with the given `Z`-degree and filtration
    /// degree at most `filt_bound`, in a fixed order.
    pub fn monomials(&self, z_degree: i64, filt_bound: u32) -> Vec<CherMonomial> {
        let n = self.dim();
        let mut out = Vec::new();
        for total in 0..=filt_bound {
            // total = |a| + |b|, z = |a| - |b|
            let twice_a = total as i64 + z_degree;
            if twice_a < 0 || twice_a % 2 != 0 || twice_a / 2 > total as i64 {
                continue;
            }
            let da = (twice_a / 2) as u32;
            let db = total - da;
            for x in exponent_vectors(n, da) {
                for w in 0..self.group.order() {
                    for y in exponent_vectors(n, db) {
                        out.push(self.mono(x.clone(), w, y));
                    }
                }
            }
        }
        out
    }

    /// Basis (in reduced echelon form over the monomial list) of the central
    /// elements with given `Z`-degree and filtration at most `filt_bound`.
    pub fn central_elements_bounded(&self, z_degree: i64, filt_bound: u32, cap: usize) -> Result<Vec<CherElement>> {
        if self.mode == Mode::TDeform {
            return self.with_mode(Mode::TZero)?.central_elements_bounded(z_degree, filt_bound, cap);
        }
        let monos = self.monomials(z_degree, filt_bound);
        if monos.len() > cap {
            return Err(Error::BoundTooLarge(format!("{} monomials exceed cap {cap}", monos.len())));
        }
        if monos.is_empty() {
            return Ok(Vec::new());
        }
        let gens = self.generators_for_center();
        // column j: commutators of generators with monomial j
        let columns = par::map(&monos, |m| {
            let e = CherElement::from_monomial(m.clone(), Coeff::one());
            gens.iter().map(|g| self.commutator(g, &e)).collect::<Vec<_>>()
        });
        // row index: (generator, monomial, coefficient key)
        let mut row_index: BTreeMap<(usize, CherMonomial, (u32, u32)), usize> = BTreeMap::new();
        for col in &columns {
            for (gi, c) in col.iter().enumerate() {
                for (m, coef) in c.terms() {
                    for (k, _) in coef.terms() {
                        let next = row_index.len();
                        row_index.entry((gi, m.clone(), *k)).or_insert(next);
                    }
                }
            }
        }
        let mut rows = vec![vec![CycNum::zero(); monos.len()]; row_index.len()];
        for (j, col) in columns.iter().enumerate() {
            for (gi, c) in col.iter().enumerate() {
                for (m, coef) in c.terms() {
                    for (k, v) in coef.terms() {
                        rows[row_index[&(gi, m.clone(), *k)]][j] = v.clone();
                    }
                }
            }
        }
        let kernel = nullspace(rows, monos.len());
        let (basis, _) = rref(kernel, monos.len());
        Ok(basis
            .into_iter()
            .map(|v| {
                let mut e = CherElement::zero();
                for (m, c) in monos.iter().zip(v) {
                    e.add_term(m.clone(), &Coeff::constant(c));
                }
                e
            })
            .collect())
    }

    /// Substitute `h = lambda` in an element of the `h^2`-deformed algebra.
    pub fn rees_specialize(&self, e: &CherElement, lambda: &CycNum) -> CherElement {
        e.eval(None, Some(lambda))
    }

    // ---- literal syntax ----

    pub fn format(&self, e: &CherElement) -> String {
        if e.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        let mut first = true;
        let mut terms: Vec<_> = e.terms().collect();
        terms.sort_by_key(|(m, _)| std::cmp::Reverse(m.x_degree() + m.y_degree()));
        for (m, coef) in terms {
            for ((td, hd), c) in coef.terms() {
                let mut factors: Vec<String> = Vec::new();
                match *td {
                    0 => {}
                    1 => factors.push("t".into()),
                    d => factors.push(format!("t^{d}")),
                }
                match *hd {
                    0 => {}
                    1 => factors.push("h".into()),
                    d => factors.push(format!("h^{d}")),
                }
                for (i, &a) in m.x.iter().enumerate() {
                    match a {
                        0 => {}
                        1 => factors.push(format!("x{}", i + 1)),
                        a => factors.push(format!("x{}^{a}", i + 1)),
                    }
                }
                factors.push(format!("w({})", self.group.word_label(m.w)));
                for (i, &b) in m.y.iter().enumerate() {
                    match b {
                        0 => {}
                        1 => factors.push(format!("y{}", i + 1)),
                        b => factors.push(format!("y{}^{b}", i + 1)),
                    }
                }
                let (neg, body) = match c.to_rat() {
                    Some(r) if r < num_traits::Zero::zero() => (true, CycNum::from_rat(-r)),
                    _ => (false, c.clone()),
                };
                if first {
                    if neg {
                        s.push('-');
                    }
                } else {
                    s.push_str(if neg { " - " } else { " + " });
                }
                first = false;
                if !body.is_one() {
                    if body.is_rational() {
                        let _ = write!(s, "{body} * ");
                    } else {
                        let _ = write!(s, "({body}) * ");
                    }
                }
                s.push_str(&factors.join(" * "));
            }
        }
        s
    }

    pub fn parse(&self, text: &str) -> Result<CherElement> {
        let text = text.trim();
        if text == "0" {
            return Ok(CherElement::zero());
        }
        let mut total = CherElement::zero();
        for (neg, term) in split_terms(text)? {
            let mut e = self.parse_term(term)?;
            if neg {
                e = e.scale(&CycNum::from_int(-1));
            }
            total = total.add(&e);
        }
        Ok(total)
    }

    fn parse_term(&self, term: &str) -> Result<CherElement> {
        let bad = |what: &str| Error::Parse(format!("{what} in term {term:?}"));
        let mut acc = self.one();
        for f in split_factors(term)? {
            let n = self.dim();
            let parse_var = |rest: &str| -> Result<(usize, u32)> {
                let (idx, pow) = match rest.split_once('^') {
                    Some((i, p)) => (i, p.parse::<u32>().map_err(|_| bad("bad exponent"))?),
                    None => (rest, 1),
                };
                let i: usize = idx.parse().map_err(|_| bad("bad variable index"))?;
                if i == 0 || i > n {
                    return Err(bad("variable index out of range"));
                }
                Ok((i - 1, pow))
            };
            let pow_of = |rest: &str| -> Result<u32> {
                match rest.strip_prefix('^') {
                    None if rest.is_empty() => Ok(1),
                    Some(p) => p.parse().map_err(|_| bad("bad exponent")),
                    None => Err(bad("bad factor")),
                }
            };
            let factor = if let Some(inner) = f.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
                self.scalar(Coeff::constant(inner.parse::<CycNum>()?))
            } else if let Some(inner) = f.strip_prefix("w(").and_then(|r| r.strip_suffix(')')) {
                let inner = inner.trim();
                let g = if inner == "e" || inner.is_empty() {
                    0
                } else {
                    let word: Vec<usize> = inner
                        .split_whitespace()
                        .map(|g| g.strip_prefix('g').and_then(|d| d.parse().ok()).ok_or_else(|| bad("bad generator")))
                        .collect::<Result<_>>()?;
                    self.group.element_from_word(&word)?
                };
                self.group_element(g)
            } else if let Some(rest) = f.strip_prefix('x') {
                let (i, p) = parse_var(rest)?;
                let mut e = vec![0; n];
                e[i] = p;
                self.monomial(e, 0, vec![0; n])
            } else if let Some(rest) = f.strip_prefix('y') {
                let (i, p) = parse_var(rest)?;
                let mut e = vec![0; n];
                e[i] = p;
                self.monomial(vec![0; n], 0, e)
            } else if let Some(rest) = f.strip_prefix('t') {
                self.scalar(Coeff::monomial(pow_of(rest)?, 0, CycNum::one()))
            } else if let Some(rest) = f.strip_prefix('h') {
                self.scalar(Coeff::monomial(0, pow_of(rest)?, CycNum::one()))
            } else {
                self.scalar(Coeff::constant(f.parse::<CycNum>()?))
            };
            acc = self.multiply(&acc, &factor);
        }
        Ok(acc)
    }
}

fn exponent_vectors(n: usize, total: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    if n == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in exponent_vectors(n - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn split_terms(text: &str) -> Result<Vec<(bool, &str)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut neg = false;
    let bytes = text.as_bytes();
    let mut seen_content = false;
    for (i, &c) in bytes.iter().enumerate() {
        match c {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 => {
                let prev = text[..i].trim_end();
                let after_op = prev.ends_with('*') || prev.ends_with('^') || prev.ends_with('/');
                if !after_op {
                    if seen_content {
                        out.push((neg, text[start..i].trim()));
                    }
                    neg = c == b'-';
                    start = i + 1;
                    seen_content = false;
                    continue;
                }
            }
            _ => {}
        }
        if !c.is_ascii_whitespace() {
            seen_content = true;
        }
        if depth < 0 {
            return Err(Error::Parse(format!("unbalanced parentheses in {text:?}")));
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced parentheses in {text:?}")));
    }
    if !seen_content {
        return Err(Error::Parse(format!("empty term in {text:?}")));
    }
    out.push((neg, text[start..].trim()));
    Ok(out)
}

fn split_factors(term: &str) -> Result<Vec<&str>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in term.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '*' | ' ' | '\t' if depth == 0 => {
                let f = term[start..i].trim();
                if !f.is_empty() {
                    out.push(f);
                }
                start = i + 1;
            }
            _ => {}
        }
    }
    let f = term[start..].trim();
    if !f.is_empty() {
        out.push(f);
    }
    if out.is_empty() {
        return Err(Error::Parse(format!("empty term {term:?}")));
    }
    Ok(out)
}

/// Result of the rank-one center computation for `mu_2`.
#[derive(Clone, Debug)]
pub struct QuadricRelation {
    /// Central element of degree 0 with `x y` coefficient 1 and no constant term.
    pub z: CherElement,
    /// `Z^2 - x^2 y^2`, a scalar.
    pub gamma: CycNum,
    /// `b` with `gamma = 4 b^2`, when `gamma / 4` is a rational square (`b >= 0`).
    pub b: Option<crate::exactnum::Rat>,
}

/// For `W = mu_2` on a line: the relation `Z^2 = X Y + gamma` with `X = x^2`,
/// `Y = y^2`, computed from the centrality solve at `t = 0`.
pub fn rank1_center_relation(group: Arc<ReflectionGroup>, k: ParameterK) -> Result<QuadricRelation> {
    if group.dim() != 1 || group.order() != 2 {
        return Err(Error::Invalid("rank-one relation needs the group of order 2 on a line".into()));
    }
    let eng = Cherednik::new(group, k, Mode::TZero)?;
    let basis = eng.central_elements_bounded(0, 2, 10_000)?;
    let xy = CherMonomial { x: vec![1], w: 0, y: vec![1] };
    let one = CherMonomial { x: vec![0], w: 0, y: vec![0] };
    // choose the combination with xy-coefficient 1 and constant coefficient 0
    let rows: Vec<Vec<CycNum>> = basis
        .iter()
        .map(|b| vec![b.coeff(&xy).constant_term(), b.coeff(&one).constant_term()])
        .collect();
    // solve sum c_i rows_i = (1, 0)
    let aug: Vec<Vec<CycNum>> = (0..2)
        .map(|r| {
            let mut v: Vec<CycNum> = rows.iter().map(|row| row[r].clone()).collect();
            v.push(if r == 0 { CycNum::one() } else { CycNum::zero() });
            v
        })
        .collect();
    let nb = basis.len();
    let (red, piv) = rref(aug, nb + 1);
    if piv.contains(&nb) {
        return Err(Error::Verification("no central element with leading term xy".into()));
    }
    let mut coeffs = vec![CycNum::zero(); nb];
    for (row, &p) in red.iter().zip(&piv) {
        coeffs[p] = row[nb].clone();
    }
    let mut z = CherElement::zero();
    for (c, b) in coeffs.iter().zip(&basis) {
        z = z.add(&b.scale(c));
    }
    let x2 = eng.power(&eng.x(0), 2);
    let y2 = eng.power(&eng.y(0), 2);
    let rel = eng.multiply(&z, &z).sub(&eng.multiply(&x2, &y2));
    let gamma = match rel.terms().collect::<Vec<_>>().as_slice() {
        [] => CycNum::zero(),
        [(m, c)] if **m == one && c.terms().count() == 1 && c.max_t_degree() == Some(0) => c.constant_term(),
        _ => return Err(Error::Verification(format!("Z^2 - XY is not a scalar: {}", eng.format(&rel)))),
    };
    let quarter = CycNum::from_rat(rat(1, 4));
    let b = (&gamma * &quarter).rational_sqrt();
    Ok(QuadricRelation { z, gamma, b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups;

    fn mu2(k0: i64, k1: i64, mode: Mode) -> Cherednik {
        let w = Arc::new(groups::cyclic(2));
        let k = ParameterK::new(&w, vec![vec![CycNum::from_int(k0), CycNum::from_int(k1)]]).unwrap();
        Cherednik::new(w, k, mode).unwrap()
    }

    #[test]
    fn rank_one_commutator() {
        let c = mu2(0, 1, Mode::TDeform);
        let yx = c.multiply(&c.y(0), &c.x(0));
        assert_eq!(c.format(&yx), "x1 * w(e) * y1 + t * w(e) - 2 * w(g0)");
    }

    #[test]
    fn commutative_at_k_zero() {
        let c = mu2(0, 0, Mode::TZero);
        let yx = c.multiply(&c.y(0), &c.x(0));
        assert_eq!(yx, c.monomial(vec![1], 0, vec![1]));
    }

    #[test]
    fn group_acts_linearly() {
        let c = mu2(0, 1, Mode::TZero);
        let s = c.group_element(1);
        let conj = c.product(&[s.clone(), c.x(0), s]);
        assert_eq!(conj, c.x(0).scale(&CycNum::from_int(-1)));
    }

    #[test]
    fn degrees() {
        let c = mu2(0, 1, Mode::TZero);
        let e = c.parse("x1^2").unwrap();
        assert_eq!(e.euler_degree(), Some(2));
        let e = c.parse("x1 * y1 + 3 * w(g0)").unwrap();
        assert_eq!(e.euler_degree(), Some(0));
        assert_eq!(c.parse("x1 + y1").unwrap().euler_degree(), None);
        assert_eq!(c.parse("x1 * y1").unwrap().filtration_degree(), Some(2));
        assert_eq!(c.parse("w(g0)").unwrap().filtration_degree(), Some(0));
        assert_eq!(c.parse("x1^2 * w(g0) * y1").unwrap().filtration_degree(), Some(3));
    }

    #[test]
    fn literal_round_trip() {
        let w = Arc::new(groups::b(2));
        let k = ParameterK::uniform(&w, &[CycNum::zero(), CycNum::one()]).unwrap();
        let c = Cherednik::new(w, k, Mode::TDeform).unwrap();
        let e = c.parse("x1^2 * w(g0 g1) * y2 + (3/2) t * w(e)").unwrap();
        let s = c.format(&e);
        assert_eq!(c.parse(&s).unwrap(), e);
        let z = c.parse("(Q(z_3): 1 + z^1) * x2 - h^2 * y1").unwrap();
        assert_eq!(c.parse(&c.format(&z)).unwrap(), z);
        assert!(c.parse("x3").is_err());
        assert!(c.parse("x1 * (1").is_err());
    }

    #[test]
    fn x_squared_is_central() {
        let c = mu2(0, 1, Mode::TZero);
        assert!(c.is_central(&c.parse("x1^2").unwrap()));
        assert!(!c.is_central(&c.x(0)));
        assert!(c.is_central(&c.parse("x1^2 * y1^2").unwrap()));
    }

    #[test]
    fn central_search_mu2() {
        let c = mu2(0, 1, Mode::TZero);
        assert_eq!(c.central_elements_bounded(0, 2, 1000).unwrap().len(), 2);
        let deg2 = c.central_elements_bounded(2, 2, 1000).unwrap();
        assert_eq!(deg2, vec![c.parse("x1^2").unwrap()]);
        assert!(c.central_elements_bounded(5, 0, 1000).unwrap().is_empty());
        assert_eq!(c.central_elements_bounded(0, 0, 1000).unwrap(), vec![c.one()]);
    }

    #[test]
    fn poisson_needs_divisibility() {
        let c = mu2(0, 1, Mode::TDeform);
        assert_eq!(c.poisson_bracket(&c.x(0), &c.y(0)).unwrap_err(), Error::NotPoissonCompatible);
        let x2 = c.parse("x1^2").unwrap();
        let y2 = c.parse("y1^2").unwrap();
        let p = c.poisson_bracket(&x2, &y2).unwrap();
        assert!(!p.is_zero());
        assert_eq!(p.euler_degree(), Some(0));
        assert!(c.poisson_bracket(&x2, &x2).unwrap().is_zero());
        assert!(c.poisson_bracket(&c.one(), &y2).unwrap().is_zero());
    }

    #[test]
    fn quadric_at_zero() {
        let w = Arc::new(groups::cyclic(2));
        let r = rank1_center_relation(w.clone(), ParameterK::zero(&w)).unwrap();
        assert!(r.gamma.is_zero());
    }
}
