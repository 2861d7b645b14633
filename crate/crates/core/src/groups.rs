//! Named reflection groups: cyclic, G(m,p,n) (types B and D), dihedral, G4.

use crate::error::{Error, Result};
use crate::exactnum::CycNum;
use crate::linalg::Matrix;
use crate::refgroup::{default_cap, ReflectionGroup};

fn z(n: u32, e: i64) -> CycNum {
    CycNum::root_of_unity(n, e)
}

fn transposition(n: usize, j: usize) -> Matrix {
    let mut m = Matrix::identity(n);
    m.set(j, j, CycNum::zero());
    m.set(j + 1, j + 1, CycNum::zero());
    m.set(j, j + 1, CycNum::one());
    m.set(j + 1, j, CycNum::one());
    m
}

/// `diag(c, 1, ..., 1)`.
pub fn first_diag(n: usize, c: &CycNum) -> Matrix {
    let mut m = Matrix::identity(n);
    m.set(0, 0, c.clone());
    m
}

/// `mu_e` acting on a line.
pub fn cyclic(e: u32) -> ReflectionGroup {
    let gens = if e == 1 { vec![] } else { vec![Matrix::scalar(1, &z(e, 1))] };
    ReflectionGroup::close(&format!("cyclic{e}"), 1, gens, default_cap()).expect("cyclic group")
}

/// Generators of `G(m,p,n)`: `diag(zeta_m^p, 1, ..)` (when `p < m`), the
/// transpositions `s_1..s_{n-1}`, then `s_1'` (when `p > 1` and `n > 1`).
pub fn gmpn_generators(m: u32, p: u32, n: usize) -> Vec<Matrix> {
    let mut gens: Vec<Matrix> = Vec::new();
    if p < m {
        gens.push(first_diag(n, &z(m, p as i64)));
    }
    gens.extend((0..n.saturating_sub(1)).map(|j| transposition(n, j)));
    if p > 1 && n > 1 {
        let mut s = Matrix::identity(n);
        s.set(0, 0, CycNum::zero());
        s.set(1, 1, CycNum::zero());
        s.set(0, 1, z(m, -1));
        s.set(1, 0, z(m, 1));
        gens.push(s);
    }
    gens
}

pub fn gmpn(m: u32, p: u32, n: usize) -> Result<ReflectionGroup> {
    if m == 0 || p == 0 || n == 0 || !m.is_multiple_of(p) {
        return Err(Error::UnknownGroup(format!("G({m},{p},{n})")));
    }
    ReflectionGroup::close(&format!("G({m},{p},{n})"), n, gmpn_generators(m, p, n), default_cap())
}

/// `G(2,1,n)`, generated by `t = diag(-1,1,..,1)` and `s_1, .., s_{n-1}`.
pub fn b(n: usize) -> ReflectionGroup {
    let mut g = gmpn(2, 1, n).expect("type B");
    g.set_name(&format!("B{n}"));
    g
}

/// `G(2,2,n)`.
pub fn d(n: usize) -> ReflectionGroup {
    let mut g = gmpn(2, 2, n).expect("type D");
    g.set_name(&format!("D{n}"));
    g
}

/// `s_j = [[0, xi^j], [xi^-j, 0]]` with `xi = zeta_{2d}`.
pub fn dihedral_reflection(d: u32, j: i64) -> Matrix {
    Matrix::from_rows(vec![
        vec![CycNum::zero(), z(2 * d, j)],
        vec![z(2 * d, -j), CycNum::zero()],
    ])
}

/// Dihedral group of order `2d`, generated by `s_0` and `s_2`.
pub fn dihedral(d: u32) -> ReflectionGroup {
    ReflectionGroup::close(
        &format!("dihedral{d}"),
        2,
        vec![dihedral_reflection(d, 0), dihedral_reflection(d, 2)],
        default_cap(),
    )
    .expect("dihedral group")
}

/// The exceptional group `G4` (order 24) generated by two order-3 reflections
/// `s = diag(1, w)` and `t` with `w = zeta_3`.
pub fn g4() -> ReflectionGroup {
    let w = z(3, 1);
    let s = Matrix::from_rows(vec![vec![CycNum::one(), CycNum::zero()], vec![CycNum::zero(), w]]);
    ReflectionGroup::close("G4", 2, vec![s, g4_second_generator()], default_cap()).expect("G4")
}

pub(crate) fn g4_second_generator() -> Matrix {
    let parse = |s: &str| s.parse::<CycNum>().expect("literal");
    Matrix::from_rows(vec![
        vec![parse(G4_T[0]), parse(G4_T[1])],
        vec![parse(G4_T[2]), parse(G4_T[3])],
    ])
}

const G4_T: [&str; 4] = [
    "Q(z_3): 1/3 + 2/3*z^1",
    "Q(z_3): -2/3 + 2/3*z^1",
    "Q(z_3): -1/3 + 1/3*z^1",
    "Q(z_3): 2/3 + 1/3*z^1",
];

/// Resolve a group name such as `B2`, `B(3)`, `D4`, `dihedral(5)`,
/// `G(4,2,2)`, `G4`, `cyclic3` or `mu2`.
pub fn by_name(name: &str) -> Result<ReflectionGroup> {
    let unknown = || Error::UnknownGroup(name.to_string());
    let s: String = name.chars().filter(|c| !c.is_whitespace()).collect();
    let lower = s.to_ascii_lowercase();
    let num_arg = |prefix: &str| -> Option<u64> {
        let rest = lower.strip_prefix(prefix)?;
        let rest = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(rest);
        rest.parse().ok()
    };
    if lower == "g4" {
        return Ok(g4());
    }
    if let Some(args) = lower.strip_prefix("g(").and_then(|r| r.strip_suffix(')')) {
        let v: Vec<u32> = args.split(',').map(|a| a.parse().map_err(|_| unknown())).collect::<Result<_>>()?;
        if v.len() != 3 || v[2] > 8 {
            return Err(unknown());
        }
        return gmpn(v[0], v[1], v[2] as usize);
    }
    for prefix in ["dihedral", "i2"] {
        if let Some(d) = num_arg(prefix) {
            if !(2..=1000).contains(&d) {
                return Err(unknown());
            }
            return Ok(dihedral(d as u32));
        }
    }
    for prefix in ["cyclic", "mu"] {
        if let Some(e) = num_arg(prefix) {
            if !(1..=1000).contains(&e) {
                return Err(unknown());
            }
            return Ok(cyclic(e as u32));
        }
    }
    if let Some(n) = num_arg("b") {
        if !(1..=8).contains(&n) {
            return Err(unknown());
        }
        let mut g = gmpn(2, 1, n as usize)?;
        g.set_name(&format!("B{n}"));
        return Ok(g);
    }
    if let Some(n) = num_arg("d") {
        if !(2..=8).contains(&n) {
            return Err(unknown());
        }
        let mut g = gmpn(2, 2, n as usize)?;
        g.set_name(&format!("D{n}"));
        return Ok(g);
    }
    Err(unknown())
}
