//! Exact arithmetic over `Q` and the cyclotomic fields `Q(zeta_N)`.
//!
//! A [`CycNum`] is stored in the power basis `1, z, ..., z^(phi(N)-1)` of the
//! smallest cyclotomic field containing it, reduced modulo the cyclotomic
//! polynomial `Phi_N`. Conductors congruent to 2 mod 4 never occur (those
//! fields coincide with `Q(zeta_{N/2})`), so two values are equal exactly when
//! their representations are.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

fn normalize_conductor(n: u32) -> u32 {
    if n % 4 == 2 {
        n / 2
    } else {
        n
    }
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Integer coefficients of `Phi_n`, lowest degree first.
fn cyclotomic_poly(n: u32, cache: &mut HashMap<u32, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = cache.get(&n) {
        return p.clone();
    }
    // x^n - 1
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let den = cyclotomic_poly(d, cache);
            num = poly_div_exact(&num, &den);
        }
    }
    cache.insert(n, num.clone());
    num
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = num.len() - 1;
    let mut q = vec![0i64; nd - dd + 1];
    for i in (0..=nd - dd).rev() {
        let c = rem[i + dd];
        // den is monic
        q[i] = c;
        for j in 0..=dd {
            rem[i + j] -= c * den[j];
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    q
}

/// Descent data from `Q(zeta_N)` to a subfield `Q(zeta_M)`.
struct Descent {
    /// Row `j` is `zeta_M^j` written in the basis of `Q(zeta_N)`.
    rows: Vec<Vec<Rat>>,
    pivots: Vec<usize>,
    /// Inverse of the square submatrix `rows[.][pivots]`.
    inv: Vec<Vec<Rat>>,
}

struct Field {
    n: u32,
    phi: usize,
    /// `x^k mod Phi_n` for `k` in `0..n`, as sparse integer vectors.
    powers: Vec<Vec<(usize, i64)>>,
    phi_poly: Vec<i64>,
    descents: RwLock<HashMap<u32, Arc<Descent>>>,
}

fn registry() -> &'static RwLock<HashMap<u32, Arc<Field>>> {
    static REG: OnceLock<RwLock<HashMap<u32, Arc<Field>>>> = OnceLock::new();
    REG.get_or_init(|| RwLock::new(HashMap::new()))
}

fn field(n: u32) -> Arc<Field> {
    if let Some(f) = registry().read().unwrap().get(&n) {
        return f.clone();
    }
    let mut cache = HashMap::new();
    let phi_poly = cyclotomic_poly(n, &mut cache);
    let phi = phi_poly.len() - 1;
    let mut powers = Vec::with_capacity(n as usize);
    let mut cur = vec![0i64; phi.max(1)];
    if phi == 0 {
        // unreachable for n >= 1: Phi_1 = x - 1 has degree 1
        unreachable!();
    }
    cur[0] = 1;
    for _ in 0..n {
        powers.push(
            cur.iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| (i, c))
                .collect(),
        );
        // multiply by x
        let top = cur[phi - 1];
        for i in (1..phi).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for i in 0..phi {
                cur[i] = cur[i]
                    .checked_sub(top.checked_mul(phi_poly[i]).expect("overflow"))
                    .expect("overflow");
            }
        }
    }
    let f = Arc::new(Field {
        n,
        phi,
        powers,
        phi_poly,
        descents: RwLock::new(HashMap::new()),
    });
    registry().write().unwrap().entry(n).or_insert(f).clone()
}

impl Field {
    /// Reduce a vector indexed by exponents mod `n` to the power basis.
    fn reduce(&self, acc: Vec<Rat>) -> Vec<Rat> {
        debug_assert_eq!(acc.len(), self.n as usize);
        let mut out: Vec<Rat> = vec![Rat::zero(); self.phi];
        for (k, c) in acc.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k < self.phi {
                out[k] += c;
            } else {
                for &(j, m) in &self.powers[k] {
                    out[j] += &c * int(m);
                }
            }
        }
        out
    }

    fn descent(&self, m: u32) -> Arc<Descent> {
        if let Some(d) = self.descents.read().unwrap().get(&m) {
            return d.clone();
        }
        let sub = field(m);
        let step = (self.n / m) as usize;
        let rows: Vec<Vec<Rat>> = (0..sub.phi)
            .map(|j| {
                let mut acc = vec![Rat::zero(); self.n as usize];
                acc[(step * j) % self.n as usize] = Rat::one();
                self.reduce(acc)
            })
            .collect();
        // choose pivots by eliminating a copy of the rows
        let mut work = rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.phi {
            if r == work.len() {
                break;
            }
            if let Some(p) = (r..work.len()).find(|&i| !work[i][col].is_zero()) {
                work.swap(r, p);
                let inv = Rat::one() / &work[r][col];
                for v in work[r].iter_mut() {
                    *v *= &inv;
                }
                for i in 0..work.len() {
                    if i != r && !work[i][col].is_zero() {
                        let f = work[i][col].clone();
                        for c in 0..self.phi {
                            let t = &f * &work[r][c];
                            work[i][c] -= t;
                        }
                    }
                }
                pivots.push(col);
                r += 1;
            }
        }
        assert_eq!(pivots.len(), sub.phi, "subfield embedding must be injective");
        let square: Vec<Vec<Rat>> = rows
            .iter()
            .map(|row| pivots.iter().map(|&p| row[p].clone()).collect())
            .collect();
        let inv = rat_matrix_inverse(square);
        let d = Arc::new(Descent { rows, pivots, inv });
        self.descents.write().unwrap().insert(m, d.clone());
        d
    }
}

fn rat_matrix_inverse(mut a: Vec<Vec<Rat>>) -> Vec<Vec<Rat>> {
    let n = a.len();
    let mut inv: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !a[i][col].is_zero()).expect("singular");
        a.swap(col, p);
        inv.swap(col, p);
        let f = Rat::one() / &a[col][col];
        for j in 0..n {
            a[col][j] *= &f;
            inv[col][j] *= &f;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let g = a[i][col].clone();
                for j in 0..n {
                    let t = &g * &a[col][j];
                    a[i][j] -= t;
                    let t = &g * &inv[col][j];
                    inv[i][j] -= t;
                }
            }
        }
    }
    inv
}

/// An exact element of a cyclotomic field.
///
/// The derived ordering is structural (conductor, then coefficients); it is a
/// total order used for deterministic sorting, not a field ordering.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycNum {
    conductor: u32,
    /// Power-basis coefficients, trailing zeros trimmed; empty means zero.
    coeffs: Vec<Rat>,
}

impl CycNum {
    pub fn zero() -> Self {
        CycNum { conductor: 1, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_rat(Rat::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(int(n))
    }

    pub fn from_rat(r: Rat) -> Self {
        if r.is_zero() {
            Self::zero()
        } else {
            CycNum { conductor: 1, coeffs: vec![r] }
        }
    }

    /// `zeta_n^e` in canonical form.
    pub fn root_of_unity(n: u32, e: i64) -> Self {
        assert!(n >= 1, "conductor must be positive");
        let e = e.rem_euclid(n as i64) as usize;
        let mut acc = vec![Rat::zero(); n as usize];
        acc[e] = Rat::one();
        Self::from_exponents(n, acc)
    }

    /// Build from a vector indexed by exponents of `zeta_n` (length `n`).
    fn from_exponents(n: u32, acc: Vec<Rat>) -> Self {
        let f = field(n);
        let dense = f.reduce(acc);
        Self::canonical(n, dense)
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Nonzero coefficients `(e, c)` of `sum c * zeta^e`.
    pub fn coeffs(&self) -> impl Iterator<Item = (usize, &Rat)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.conductor == 1 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.conductor == 1
    }

    pub fn to_rat(&self) -> Option<Rat> {
        if self.conductor != 1 {
            None
        } else {
            Some(self.coeffs.first().cloned().unwrap_or_else(Rat::zero))
        }
    }

    fn rat_part(&self) -> Rat {
        self.coeffs.first().cloned().unwrap_or_else(Rat::zero)
    }

    fn canonical(mut n: u32, mut dense: Vec<Rat>) -> Self {
        loop {
            while dense.last().is_some_and(|c| c.is_zero()) {
                dense.pop();
            }
            if dense.len() <= 1 {
                return CycNum { conductor: 1, coeffs: dense };
            }
            let mut descended = false;
            for p in prime_factors(n) {
                let m = normalize_conductor(n / p);
                if let Some(v) = descend(n, m, &dense) {
                    n = m;
                    dense = v;
                    descended = true;
                    break;
                }
            }
            if !descended {
                return CycNum { conductor: n, coeffs: dense };
            }
        }
    }

    /// Coefficients in the power basis of `Q(zeta_l)`, where `conductor | l`.
    fn dense_in(&self, l: u32) -> Vec<Rat> {
        let f = field(l);
        if self.conductor == l {
            let mut v = self.coeffs.clone();
            v.resize(f.phi, Rat::zero());
            return v;
        }
        let step = (l / self.conductor) as usize;
        let mut acc = vec![Rat::zero(); l as usize];
        for (e, c) in self.coeffs() {
            acc[(e * step) % l as usize] += c;
        }
        f.reduce(acc)
    }

    fn common(&self, other: &Self) -> u32 {
        normalize_conductor(self.conductor.lcm(&other.conductor))
    }

    /// Embed into `Q(zeta_{k N})` and return the raw coefficient vector there.
    /// Mostly useful for checking that promotion preserves values.
    pub fn promoted_coeffs(&self, l: u32) -> Vec<Rat> {
        assert!(l.is_multiple_of(self.conductor));
        self.dense_in(normalize_conductor(l))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.conductor == 1 {
            return Ok(Self::from_rat(Rat::one() / self.rat_part()));
        }
        let f = field(self.conductor);
        let phi_poly: Vec<Rat> = f.phi_poly.iter().map(|&c| int(c)).collect();
        let a = self.dense_in(self.conductor);
        let inv = poly_inverse_mod(&a, &phi_poly);
        Ok(Self::canonical(self.conductor, inv))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    /// Galois automorphism `zeta -> zeta^k` (k coprime to the conductor).
    pub fn galois(&self, k: i64) -> Self {
        if self.conductor == 1 {
            return self.clone();
        }
        let n = self.conductor as i64;
        let mut acc = vec![Rat::zero(); n as usize];
        for (e, c) in self.coeffs() {
            acc[((e as i64) * k).rem_euclid(n) as usize] += c;
        }
        Self::from_exponents(self.conductor, acc)
    }

    pub fn complex_conjugate(&self) -> Self {
        self.galois(-1)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative order if this is a root of unity (searched up to `cap`).
    pub fn root_order(&self, cap: u32) -> Option<u32> {
        let mut acc = self.clone();
        for k in 1..=cap {
            if acc.is_one() {
                return Some(k);
            }
            acc = &acc * self;
        }
        None
    }

    /// Exact square root of a rational square, if any.
    pub fn rational_sqrt(&self) -> Option<Rat> {
        let r = self.to_rat()?;
        if r.is_negative() {
            return None;
        }
        let n = r.numer().sqrt();
        let d = r.denom().sqrt();
        if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
            Some(Rat::new(n, d))
        } else {
            None
        }
    }

    /// Approximate complex value, for debug printing only.
    pub fn approx(&self) -> (f64, f64) {
        let n = self.conductor as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (e, c) in self.coeffs() {
            let v = c.to_f64().unwrap_or(f64::NAN);
            let a = 2.0 * std::f64::consts::PI * e as f64 / n;
            re += v * a.cos();
            im += v * a.sin();
        }
        (re, im)
    }
}

fn descend(n: u32, m: u32, dense: &[Rat]) -> Option<Vec<Rat>> {
    let f = field(n);
    let d = f.descent(m);
    let mut v = dense.to_vec();
    v.resize(f.phi, Rat::zero());
    let k = d.pivots.len();
    // c * square = v[pivots]
    let target: Vec<&Rat> = d.pivots.iter().map(|&p| &v[p]).collect();
    let mut c = vec![Rat::zero(); k];
    for (i, t) in target.iter().enumerate() {
        if t.is_zero() {
            continue;
        }
        for j in 0..k {
            c[j] += *t * &d.inv[i][j];
        }
    }
    let mut check = vec![Rat::zero(); f.phi];
    for (j, cj) in c.iter().enumerate() {
        if cj.is_zero() {
            continue;
        }
        for (col, x) in d.rows[j].iter().enumerate() {
            if !x.is_zero() {
                check[col] += cj * x;
            }
        }
    }
    if check == v {
        Some(c)
    } else {
        None
    }
}

// dense polynomials over Q, lowest degree first

fn ptrim(mut p: Vec<Rat>) -> Vec<Rat> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn pdivmod(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let b = ptrim(b.to_vec());
    let mut r = ptrim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![Rat::zero(); r.len() - b.len() + 1];
    let lead_inv = Rat::one() / b.last().unwrap();
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() * &lead_inv;
        for (i, bc) in b.iter().enumerate() {
            let t = &c * bc;
            r[shift + i] -= t;
        }
        q[shift] = c;
        r = ptrim(r);
    }
    (q, r)
}

fn psub_mul(a: &[Rat], q: &[Rat], b: &[Rat]) -> Vec<Rat> {
    // a - q*b
    let mut out = a.to_vec();
    let len = (q.len() + b.len()).saturating_sub(1).max(a.len());
    out.resize(len, Rat::zero());
    for (i, qi) in q.iter().enumerate() {
        if qi.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] -= qi * bj;
        }
    }
    ptrim(out)
}

/// Inverse of `a` modulo the irreducible `m`, by the extended Euclidean algorithm.
fn poly_inverse_mod(a: &[Rat], m: &[Rat]) -> Vec<Rat> {
    let (mut r0, mut r1) = (m.to_vec(), ptrim(a.to_vec()));
    let (mut s0, mut s1): (Vec<Rat>, Vec<Rat>) = (Vec::new(), vec![Rat::one()]);
    while !r1.is_empty() {
        let (q, r) = pdivmod(&r0, &r1);
        let s = psub_mul(&s0, &q, &s1);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    // r0 is a nonzero constant since m is irreducible and a != 0 mod m
    assert_eq!(r0.len(), 1, "cyclotomic polynomial must be irreducible");
    let c = Rat::one() / &r0[0];
    let (_, s) = pdivmod(&s0, m);
    s.into_iter().map(|x| x * &c).collect()
}

impl Add for &CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        if self.conductor == 1 && rhs.conductor == 1 {
            return CycNum::from_rat(self.rat_part() + rhs.rat_part());
        }
        let l = self.common(rhs);
        let mut a = self.dense_in(l);
        let b = rhs.dense_in(l);
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
        CycNum::canonical(l, a)
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for &CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        self + &(-rhs)
    }
}

impl Mul for &CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        if self.is_zero() || rhs.is_zero() {
            return CycNum::zero();
        }
        if self.conductor == 1 {
            let r = self.rat_part();
            return CycNum {
                conductor: rhs.conductor,
                coeffs: rhs.coeffs.iter().map(|c| c * &r).collect(),
            };
        }
        if rhs.conductor == 1 {
            return rhs * self;
        }
        let l = self.common(rhs);
        let a = self.dense_in(l);
        let b = rhs.dense_in(l);
        let mut acc = vec![Rat::zero(); l as usize];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                acc[(i + j) % l as usize] += x * y;
            }
        }
        CycNum::from_exponents(l, acc)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: &CycNum) -> CycNum {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

impl From<Rat> for CycNum {
    fn from(r: Rat) -> Self {
        CycNum::from_rat(r)
    }
}

impl From<i64> for CycNum {
    fn from(n: i64) -> Self {
        CycNum::from_int(n)
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.conductor == 1 {
            return write!(f, "{}", self.rat_part());
        }
        write!(f, "Q(z_{}): ", self.conductor)?;
        let mut first = true;
        for (e, c) in self.coeffs() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            if e == 0 {
                write!(f, "{}", a)?;
            } else if a.is_one() {
                write!(f, "z^{}", e)?;
            } else {
                write!(f, "{}*z^{}", a, e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for CycNum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (n, body) = if let Some(rest) = s.strip_prefix("Q(z_") {
            let close = rest
                .find("):")
                .ok_or_else(|| Error::Parse(format!("missing '):' in {s:?}")))?;
            let n: u32 = rest[..close]
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad conductor in {s:?}")))?;
            if n == 0 {
                return Err(Error::Parse("conductor must be positive".into()));
            }
            (n, &rest[close + 2..])
        } else {
            (1, s)
        };
        let body: String = body.chars().filter(|c| !c.is_whitespace()).collect();
        if body.is_empty() {
            return Err(Error::Parse("empty number".into()));
        }
        let mut acc = vec![Rat::zero(); n as usize];
        for term in split_signed_terms(&body) {
            let (neg, t) = match term.strip_prefix('-') {
                Some(r) => (true, r),
                None => (false, term.strip_prefix('+').unwrap_or(term)),
            };
            let (coef, exp) = parse_term(t, s)?;
            let e = exp.rem_euclid(n as i64) as usize;
            acc[e] += if neg { -coef } else { coef };
        }
        Ok(CycNum::from_exponents(n, acc))
    }
}

fn split_signed_terms(body: &str) -> Vec<&str> {
    let bytes = body.as_bytes();
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..bytes.len() {
        let c = bytes[i];
        let prev = bytes[i - 1];
        if (c == b'+' || c == b'-') && !matches!(prev, b'^' | b'*' | b'/' | b'+' | b'-') {
            out.push(&body[start..i]);
            start = i;
        }
    }
    out.push(&body[start..]);
    out
}

fn parse_term(t: &str, whole: &str) -> Result<(Rat, i64)> {
    let bad = || Error::Parse(format!("bad term {t:?} in {whole:?}"));
    let parse_rat = |c: &str| Rat::from_str(c).map_err(|_| bad());
    let parse_exp = |z: &str| -> Result<i64> {
        if z == "z" {
            Ok(1)
        } else if let Some(e) = z.strip_prefix("z^") {
            e.parse::<i64>().map_err(|_| bad())
        } else {
            Err(bad())
        }
    };
    if let Some((c, z)) = t.split_once('*') {
        Ok((parse_rat(c)?, parse_exp(z)?))
    } else if t.starts_with('z') {
        Ok((Rat::one(), parse_exp(t)?))
    } else {
        Ok((parse_rat(t)?, 0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, e: i64) -> CycNum {
        CycNum::root_of_unity(n, e)
    }

    #[test]
    fn cube_roots_sum_to_minus_one() {
        assert_eq!(&z(3, 1) + &z(3, 2), CycNum::from_int(-1));
    }

    #[test]
    fn conductor_drops_after_squaring() {
        let i = &z(8, 1) * &z(8, 1);
        assert_eq!(i, z(4, 1));
        assert_eq!(i.conductor(), 4);
        assert_eq!(&i * &i, CycNum::from_int(-1));
    }

    #[test]
    fn inverse_of_one_plus_zeta5() {
        let a = &CycNum::one() + &z(5, 1);
        let v = a.inv().unwrap();
        assert_eq!(&v * &a, CycNum::one());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(CycNum::zero().inv(), Err(Error::DivisionByZero));
        assert!(CycNum::one().try_div(&CycNum::zero()).is_err());
    }

    #[test]
    fn small_roots() {
        assert_eq!(z(1, 0), CycNum::one());
        assert_eq!(z(2, 1), CycNum::from_int(-1));
        let i = z(4, 1);
        assert_eq!(&i * &i, CycNum::from_int(-1));
        assert_eq!(z(6, 1).conductor(), 3);
        assert_eq!(z(12, 3), z(4, 1));
        assert_eq!(z(12, 4), z(3, 1));
    }

    #[test]
    fn root_orders() {
        assert_eq!(z(12, 1).root_order(100), Some(12));
        assert_eq!(z(12, 2).root_order(100), Some(6));
        assert_eq!(z(10, 5).root_order(100), Some(2));
        assert_eq!(CycNum::from_int(2).root_order(50), None);
    }

    #[test]
    fn mixed_conductors() {
        // i * zeta_3 lives in Q(zeta_12)
        let w = &z(4, 1) * &z(3, 1);
        assert_eq!(w.conductor(), 12);
        assert_eq!(w, z(12, 7));
        // sqrt(2) = zeta_8 + zeta_8^7 squared is 2
        let s2 = &z(8, 1) + &z(8, 7);
        assert_eq!(&s2 * &s2, CycNum::from_int(2));
        assert_eq!(s2.conductor(), 8);
        // sqrt(-3) = 1 + 2 zeta_3
        let s3 = &CycNum::one() + &(&CycNum::from_int(2) * &z(3, 1));
        assert_eq!(&s3 * &s3, CycNum::from_int(-3));
    }

    #[test]
    fn conjugation() {
        assert_eq!(z(5, 2).complex_conjugate(), z(5, 3));
        let a = &CycNum::from_int(3) + &z(8, 3);
        let n = &a * &a.complex_conjugate();
        assert_eq!(n.complex_conjugate(), n);
        assert!(!n.is_rational());
    }

    #[test]
    fn display_round_trip() {
        let vals = [
            CycNum::zero(),
            CycNum::from_rat(rat(-3, 7)),
            z(4, 1),
            &z(3, 2) * &CycNum::from_rat(rat(5, 2)),
            &(&z(8, 1) + &z(8, 3)) - &CycNum::from_int(4),
            &z(12, 5) + &z(5, 2),
        ];
        for v in vals {
            let s = v.to_string();
            assert_eq!(s.parse::<CycNum>().unwrap(), v, "{s}");
        }
        assert_eq!("Q(z_4): z^1".parse::<CycNum>().unwrap(), z(4, 1));
        assert_eq!("Q(z_3): z^3".parse::<CycNum>().unwrap(), CycNum::one());
        assert_eq!("Q(z_4): 1 - 2*z^1".to_string().parse::<CycNum>().unwrap().to_string(), "Q(z_4): 1 - 2*z^1");
        assert!("Q(z_0): 1".parse::<CycNum>().is_err());
        assert!("Q(z_3) 1".parse::<CycNum>().is_err());
        assert!("1/0x".parse::<CycNum>().is_err());
    }

    #[test]
    fn rational_sqrt() {
        assert_eq!(CycNum::from_rat(rat(9, 4)).rational_sqrt(), Some(rat(3, 2)));
        assert_eq!(CycNum::from_int(2).rational_sqrt(), None);
        assert_eq!(z(4, 1).rational_sqrt(), None);
    }
}
