//! Dense linear algebra over [`CycNum`]: matrices, row reduction, subspaces.

use std::fmt;

use crate::exactnum::CycNum;

pub type Vector = Vec<CycNum>;

pub fn zero_vec(n: usize) -> Vector {
    vec![CycNum::zero(); n]
}

pub fn dot(a: &[CycNum], b: &[CycNum]) -> CycNum {
    let mut acc = CycNum::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = &acc + &(x * y);
        }
    }
    acc
}

pub fn is_zero_vec(v: &[CycNum]) -> bool {
    v.iter().all(CycNum::is_zero)
}

/// Scale so that the first nonzero coordinate is 1.
pub fn normalize_first(v: &[CycNum]) -> Vector {
    match v.iter().find(|c| !c.is_zero()) {
        None => v.to_vec(),
        Some(lead) => {
            let inv = lead.inv().expect("nonzero lead");
            v.iter().map(|c| c * &inv).collect()
        }
    }
}

pub fn vec_key(v: &[CycNum]) -> String {
    v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<CycNum>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![CycNum::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, CycNum::one());
        }
        m
    }

    pub fn scalar(n: usize, c: &CycNum) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn diagonal(d: &[CycNum]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, c) in d.iter().enumerate() {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vector>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CycNum {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycNum) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[CycNum] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[CycNum] {
        &self.data
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let c = self.get(i, j);
                    if i == j {
                        c.is_one()
                    } else {
                        c.is_zero()
                    }
                })
            })
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[CycNum]) -> Vector {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[CycNum]) -> Vector {
        assert_eq!(self.rows, v.len());
        (0..self.cols)
            .map(|j| {
                let mut acc = CycNum::zero();
                for (i, x) in v.iter().enumerate() {
                    let m = self.get(i, j);
                    if !x.is_zero() && !m.is_zero() {
                        acc = &acc + &(x * m);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &CycNum) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn minus_identity(&self) -> Matrix {
        self.sub(&Matrix::identity(self.rows))
    }

    pub fn rank(&self) -> usize {
        rref(self.row_vecs(), self.cols).1.len()
    }

    pub fn det(&self) -> CycNum {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.row_vecs();
        let mut det = CycNum::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| !a[i][col].is_zero()) else {
                return CycNum::zero();
            };
            if p != col {
                a.swap(p, col);
                det = -det;
            }
            det = &det * &a[col][col];
            let inv = a[col][col].inv().expect("nonzero pivot");
            for i in col + 1..n {
                if a[i][col].is_zero() {
                    continue;
                }
                let f = &a[i][col] * &inv;
                for j in col..n {
                    let t = &f * &a[col][j];
                    a[i][j] = &a[i][j] - &t;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let rows: Vec<Vector> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { CycNum::one() } else { CycNum::zero() }));
                r
            })
            .collect();
        let (red, piv) = rref(rows, 2 * n);
        if piv.len() < n || piv[n - 1] >= n {
            return None;
        }
        Some(Matrix::from_rows(red.into_iter().map(|r| r[n..].to_vec()).collect()))
    }

    /// Basis of the right kernel `{v : M v = 0}`.
    pub fn kernel(&self) -> Vec<Vector> {
        nullspace(self.row_vecs(), self.cols)
    }

    /// Fixed space `ker(M - I)`.
    pub fn fixed_space(&self) -> Subspace {
        Subspace::from_basis_unchecked(self.rows, self.minus_identity().kernel())
    }

    pub fn key(&self) -> String {
        let rows: Vec<String> = (0..self.rows).map(|i| format!("[{}]", vec_key(self.row(i)))).collect();
        rows.join(" ")
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.key())
    }
}

/// Reduced row echelon form. Returns nonzero rows and pivot columns.
pub fn rref(mut rows: Vec<Vector>, ncols: usize) -> (Vec<Vector>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        if !rows[r][col].is_one() {
            let inv = rows[r][col].inv().expect("nonzero pivot");
            for c in rows[r].iter_mut().skip(col) {
                if !c.is_zero() {
                    *c = &*c * &inv;
                }
            }
        }
        for i in 0..rows.len() {
            if i == r || rows[i][col].is_zero() {
                continue;
            }
            let f = rows[i][col].clone();
            for c in col..ncols {
                if rows[r][c].is_zero() {
                    continue;
                }
                let t = &f * &rows[r][c];
                rows[i][c] = &rows[i][c] - &t;
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Basis of `{v : row . v = 0 for every row}`.
pub fn nullspace(rows: Vec<Vector>, ncols: usize) -> Vec<Vector> {
    let (red, piv) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = zero_vec(ncols);
            v[f] = CycNum::one();
            for (row, &p) in red.iter().zip(&piv) {
                if !row[f].is_zero() {
                    v[p] = -&row[f];
                }
            }
            v
        })
        .collect()
}

/// A linear subspace of `C^n`, stored by a reduced row echelon basis so that
/// equal subspaces have equal representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(ambient: usize, vectors: Vec<Vector>) -> Self {
        let (basis, pivots) = rref(vectors, ambient);
        Subspace { ambient, basis, pivots }
    }

    fn from_basis_unchecked(ambient: usize, vectors: Vec<Vector>) -> Self {
        Self::span(ambient, vectors)
    }

    pub fn whole(n: usize) -> Self {
        Self::span(n, Matrix::identity(n).row_vecs())
    }

    pub fn zero(n: usize) -> Self {
        Subspace { ambient: n, basis: Vec::new(), pivots: Vec::new() }
    }

    /// Zero set of the given covectors.
    pub fn kernel_of(ambient: usize, covectors: Vec<Vector>) -> Self {
        Self::span(ambient, nullspace(covectors, ambient))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of a vector of this subspace in the echelon basis.
    pub fn coords(&self, v: &[CycNum]) -> Vector {
        self.pivots.iter().map(|&p| v[p].clone()).collect()
    }

    pub fn from_coords(&self, c: &[CycNum]) -> Vector {
        let mut v = zero_vec(self.ambient);
        for (ci, b) in c.iter().zip(&self.basis) {
            if ci.is_zero() {
                continue;
            }
            for (x, y) in v.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x = &*x + &(ci * y);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[CycNum]) -> bool {
        let c = self.coords(v);
        self.from_coords(&c) == v
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    /// Covectors cutting out this subspace.
    pub fn annihilator(&self) -> Vec<Vector> {
        nullspace(self.basis.clone(), self.ambient)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        if self.dim() == self.ambient {
            return other.clone();
        }
        if other.dim() == self.ambient {
            return self.clone();
        }
        let mut eqs = self.annihilator();
        eqs.extend(other.annihilator());
        Subspace::kernel_of(self.ambient, eqs)
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut v = self.basis.clone();
        v.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, v)
    }

    /// Image under a linear map.
    pub fn image(&self, m: &Matrix) -> Subspace {
        Subspace::span(m.rows(), self.basis.iter().map(|b| m.mul_vec(b)).collect())
    }

    /// Does the covector vanish identically on this subspace?
    pub fn annihilated_by(&self, alpha: &[CycNum]) -> bool {
        self.basis.iter().all(|b| dot(alpha, b).is_zero())
    }

    /// Restriction of `m` (which must stabilize this subspace) in echelon coordinates.
    pub fn restrict(&self, m: &Matrix) -> Matrix {
        let d = self.dim();
        let mut out = Matrix::zeros(d, d);
        for (j, b) in self.basis.iter().enumerate() {
            let c = self.coords(&m.mul_vec(b));
            for (i, x) in c.into_iter().enumerate() {
                out.set(i, j, x);
            }
        }
        out
    }

    pub fn key(&self) -> String {
        let rows: Vec<String> = self.basis.iter().map(|b| format!("[{}]", vec_key(b))).collect();
        format!("<{}>", rows.join(" "))
    }

    /// A point of this subspace on which none of `avoid` vanishes, for every
    /// covector of `avoid` that does not vanish on the whole subspace.
    ///
    /// Candidates are tried in a fixed order: prime weights on the echelon
    /// basis, then shifted prime weights, then points of the moment curve
    /// `(1, s, s^2, ...)`. The last family always succeeds since a nonzero
    /// polynomial of degree below `dim` has fewer than `dim` roots.
    pub fn generic_point(&self, avoid: &[Vector]) -> Vector {
        let relevant: Vec<&Vector> = avoid.iter().filter(|a| !self.annihilated_by(a)).collect();
        let ok = |p: &Vector| relevant.iter().all(|a| !dot(a, p).is_zero());
        let d = self.dim();
        for shift in 0..8 {
            let c: Vector = PRIMES[shift..shift + d].iter().map(|&p| CycNum::from_int(p)).collect();
            let p = self.from_coords(&c);
            if ok(&p) {
                return p;
            }
        }
        let mut s = 2i64;
        loop {
            let mut pw = CycNum::one();
            let base = CycNum::from_int(s);
            let c: Vector = (0..d)
                .map(|_| {
                    let x = pw.clone();
                    pw = &pw * &base;
                    x
                })
                .collect();
            let p = self.from_coords(&c);
            if ok(&p) {
                return p;
            }
            s += 1;
        }
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.key())
    }
}

const PRIMES: [i64; 64] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103,
    107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223,
    227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307, 311,
];

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> CycNum {
        CycNum::from_int(n)
    }

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    #[test]
    fn det_and_inverse() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.det(), q(1));
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
        assert_eq!(m(&[&[0, 1], &[1, 0]]).det(), q(-1));
    }

    #[test]
    fn kernel_and_fixed_space() {
        let swap = m(&[&[0, 1], &[1, 0]]);
        let fixed = swap.fixed_space();
        assert_eq!(fixed.dim(), 1);
        assert!(fixed.contains(&[q(1), q(1)]));
        assert!(!fixed.contains(&[q(1), q(0)]));
    }

    #[test]
    fn intersections() {
        let a = Subspace::span(3, vec![vec![q(1), q(0), q(0)], vec![q(0), q(1), q(0)]]);
        let b = Subspace::span(3, vec![vec![q(0), q(1), q(0)], vec![q(0), q(0), q(1)]]);
        let c = a.intersect(&b);
        assert_eq!(c, Subspace::span(3, vec![vec![q(0), q(5), q(0)]]));
        assert_eq!(a.sum(&b), Subspace::whole(3));
        assert_eq!(Subspace::zero(3).dim(), 0);
    }

    #[test]
    fn generic_point_avoids_hyperplanes() {
        let s = Subspace::whole(2);
        // covectors x - y, 2x - 3y would vanish on prime weights (2, 3)
        let avoid = vec![vec![q(3), q(-2)], vec![q(1), q(-1)]];
        let p = s.generic_point(&avoid);
        for a in &avoid {
            assert!(!dot(a, &p).is_zero());
        }
        // covectors vanishing on the subspace are ignored
        let line = Subspace::span(2, vec![vec![q(1), q(1)]]);
        let p = line.generic_point(&avoid);
        assert!(line.contains(&p));
        assert!(!dot(&avoid[0], &p).is_zero());
    }

    #[test]
    fn restriction_in_coordinates() {
        let swap = m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        let plane = Subspace::span(3, vec![vec![q(1), q(1), q(0)], vec![q(0), q(0), q(1)]]);
        assert!(plane.restrict(&swap).is_identity());
    }
}
