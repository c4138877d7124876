//! Matrices over Conway carriers: block star/plus/omega, the restricted omega
//! `M^{ω,k}`, permutation conjugation and group identities.

use serde::{Deserialize, Serialize};

use crate::algebra::{
    AlgebraError, Check, ConwayHemiring, ConwaySemiring, Elem, HemimodulePair, Law, LawReport, Monoid, Sampler,
    run_laws,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix must be square")]
    NotSquare,
    #[error("split point {k} invalid for size {n}")]
    Split { k: usize, n: usize },
    #[error("group table invalid: {0}")]
    InvalidGroup(String),
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    entries: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn new(rows: usize, cols: usize, entries: Vec<E>) -> Result<Self, MatrixError> {
        if entries.len() != rows * cols {
            return Err(MatrixError::Dimension(format!("{} entries for {rows}x{cols}", entries.len())));
        }
        Ok(Matrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(MatrixError::Dimension("ragged rows".into()));
        }
        Matrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn filled(rows: usize, cols: usize, e: E) -> Self {
        Matrix { rows, cols, entries: vec![e; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: E) {
        self.entries[i * self.cols + j] = e;
    }

    pub fn entries(&self) -> &[E] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> Vec<E> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let mut entries = Vec::with_capacity((r1 - r0) * (c1 - c0));
        for i in r0..r1 {
            entries.extend_from_slice(&self.entries[i * self.cols + c0..i * self.cols + c1]);
        }
        Matrix { rows: r1 - r0, cols: c1 - c0, entries }
    }

    /// Assembles `[[a, b], [c, d]]`.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let (rows, cols) = (a.rows + c.rows, a.cols + b.cols);
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..a.rows {
            entries.extend_from_slice(&a.entries[i * a.cols..(i + 1) * a.cols]);
            entries.extend_from_slice(&b.entries[i * b.cols..(i + 1) * b.cols]);
        }
        for i in 0..c.rows {
            entries.extend_from_slice(&c.entries[i * c.cols..(i + 1) * c.cols]);
            entries.extend_from_slice(&d.entries[i * d.cols..(i + 1) * d.cols]);
        }
        Matrix { rows, cols, entries }
    }

    fn square(&self) -> Result<usize, MatrixError> {
        if self.rows == self.cols {
            Ok(self.rows)
        } else {
            Err(MatrixError::NotSquare)
        }
    }

    pub fn map<F: Clone>(&self, f: impl Fn(&E) -> F) -> Matrix<F> {
        Matrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<String>,
}

pub fn matrix_to_json<C: Monoid>(c: &C, m: &Matrix<C::Elem>) -> MatrixJson {
    MatrixJson { rows: m.rows, cols: m.cols, entries: m.entries.iter().map(|e| c.render(e)).collect() }
}

pub fn matrix_from_json<C: Monoid>(c: &C, j: &MatrixJson) -> Result<Matrix<C::Elem>, MatrixError> {
    let entries = j.entries.iter().map(|s| c.parse(s)).collect::<Result<Vec<_>, _>>()?;
    Matrix::new(j.rows, j.cols, entries)
}

pub fn zeros<C: Monoid>(c: &C, rows: usize, cols: usize) -> Matrix<C::Elem> {
    Matrix::filled(rows, cols, c.zero())
}

pub fn identity<C: crate::algebra::Semiring>(c: &C, n: usize) -> Matrix<C::Elem> {
    let mut m = zeros(c, n, n);
    for i in 0..n {
        m.set(i, i, c.one());
    }
    m
}

pub fn mat_add<C: Monoid>(c: &C, a: &Matrix<C::Elem>, b: &Matrix<C::Elem>) -> Matrix<C::Elem> {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols), "matrix sum dimensions");
    Matrix {
        rows: a.rows,
        cols: a.cols,
        entries: a.entries.iter().zip(&b.entries).map(|(x, y)| c.add(x, y)).collect(),
    }
}

pub fn mat_mul<C: crate::algebra::Hemiring>(c: &C, a: &Matrix<C::Elem>, b: &Matrix<C::Elem>) -> Matrix<C::Elem> {
    assert_eq!(a.cols, b.rows, "matrix product dimensions");
    let mut entries = Vec::with_capacity(a.rows * b.cols);
    for i in 0..a.rows {
        for j in 0..b.cols {
            let mut acc = c.zero();
            for k in 0..a.cols {
                acc = c.add(&acc, &c.mul(a.get(i, k), b.get(k, j)));
            }
            entries.push(acc);
        }
    }
    Matrix { rows: a.rows, cols: b.cols, entries }
}

pub fn mat_equal<C: Monoid>(c: &C, a: &Matrix<C::Elem>, b: &Matrix<C::Elem>) -> bool {
    (a.rows, a.cols) == (b.rows, b.cols) && a.entries.iter().zip(&b.entries).all(|(x, y)| c.equal(x, y))
}

pub fn render_matrix<C: Monoid>(c: &C, m: &Matrix<C::Elem>) -> String {
    let rows: Vec<String> = (0..m.rows)
        .map(|i| format!("[{}]", m.row(i).iter().map(|e| c.render(e)).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

/// Matrix acting on a column over the module: `(Mv)_i = Σ_j M_ij·v_j`.
pub fn mat_act<P: HemimodulePair>(p: &P, m: &Matrix<Elem<P::H>>, v: &[Elem<P::V>]) -> Vec<Elem<P::V>> {
    assert_eq!(m.cols, v.len(), "matrix-column dimensions");
    let module = p.module();
    (0..m.rows)
        .map(|i| {
            let mut acc = module.zero();
            for (j, x) in v.iter().enumerate() {
                acc = module.add(&acc, &p.act(m.get(i, j), x));
            }
            acc
        })
        .collect()
}

fn vec_add<C: Monoid>(c: &C, a: &[C::Elem], b: &[C::Elem]) -> Vec<C::Elem> {
    a.iter().zip(b).map(|(x, y)| c.add(x, y)).collect()
}

/// `M*·v = M⁺v + v`.
fn star_act_vec<P: HemimodulePair>(p: &P, m_plus: &Matrix<Elem<P::H>>, v: &[Elem<P::V>]) -> Vec<Elem<P::V>> {
    vec_add(p.module(), &mat_act(p, m_plus, v), v)
}

// ---------------------------------------------------------------------------
// Star and plus

/// Matrix star by the block formula, split at `split` (default 1) at the top
/// level and at 1 below.
pub fn mat_star<C: ConwaySemiring>(c: &C, m: &Matrix<C::Elem>, split: Option<usize>) -> Result<Matrix<C::Elem>, MatrixError> {
    let n = m.square()?;
    if n == 0 {
        return Ok(m.clone());
    }
    if n == 1 {
        return Ok(Matrix { rows: 1, cols: 1, entries: vec![c.star(&m.entries[0])] });
    }
    let k = split.unwrap_or(1);
    if k == 0 || k >= n {
        return Err(MatrixError::Split { k, n });
    }
    let (x, y, u, v) = (m.block(0, k, 0, k), m.block(0, k, k, n), m.block(k, n, 0, k), m.block(k, n, k, n));
    let xs = mat_star(c, &x, None)?;
    let vs = mat_star(c, &v, None)?;
    let alpha = mat_star(c, &mat_add(c, &x, &mat_mul(c, &mat_mul(c, &y, &vs), &u)), None)?;
    let delta = mat_star(c, &mat_add(c, &v, &mat_mul(c, &mat_mul(c, &u, &xs), &y)), None)?;
    let beta = mat_mul(c, &mat_mul(c, &alpha, &y), &vs);
    let gamma = mat_mul(c, &mat_mul(c, &delta, &u), &xs);
    Ok(Matrix::from_blocks(&alpha, &beta, &gamma, &delta))
}

/// `M*·N = M⁺N + N` given `M⁺`.
fn star_then_mat<C: ConwayHemiring>(c: &C, m_plus: &Matrix<C::Elem>, n: &Matrix<C::Elem>) -> Matrix<C::Elem> {
    mat_add(c, &mat_mul(c, m_plus, n), n)
}

/// `N·M* = N + NM⁺` given `M⁺`.
fn then_star_mat<C: ConwayHemiring>(c: &C, n: &Matrix<C::Elem>, m_plus: &Matrix<C::Elem>) -> Matrix<C::Elem> {
    mat_add(c, n, &mat_mul(c, n, m_plus))
}

/// Matrix plus by the block formula, written with plus only.
pub fn mat_plus_split<C: ConwayHemiring>(c: &C, m: &Matrix<C::Elem>, split: Option<usize>) -> Result<Matrix<C::Elem>, MatrixError> {
    let n = m.square()?;
    if n == 0 {
        return Ok(m.clone());
    }
    if n == 1 {
        return Ok(Matrix { rows: 1, cols: 1, entries: vec![c.plus(&m.entries[0])] });
    }
    let k = split.unwrap_or(1);
    if k == 0 || k >= n {
        return Err(MatrixError::Split { k, n });
    }
    let (x, y, u, v) = (m.block(0, k, 0, k), m.block(0, k, k, n), m.block(k, n, 0, k), m.block(k, n, k, n));
    let xp = mat_plus_split(c, &x, None)?;
    let vp = mat_plus_split(c, &v, None)?;
    let p = mat_add(c, &x, &mat_mul(c, &y, &star_then_mat(c, &vp, &u)));
    let q = mat_add(c, &v, &mat_mul(c, &u, &star_then_mat(c, &xp, &y)));
    let pp = mat_plus_split(c, &p, None)?;
    let qp = mat_plus_split(c, &q, None)?;
    let beta = star_then_mat(c, &pp, &then_star_mat(c, &y, &vp));
    let gamma = star_then_mat(c, &qp, &then_star_mat(c, &u, &xp));
    Ok(Matrix::from_blocks(&pp, &beta, &gamma, &qp))
}

pub fn mat_plus<C: ConwayHemiring>(c: &C, m: &Matrix<C::Elem>) -> Result<Matrix<C::Elem>, MatrixError> {
    mat_plus_split(c, m, None)
}

/// Matrix plus by eliminating the first index and recursing on the rest:
/// with `M = [[x, y], [u, V]]` and `N = V + u·x*y`,
/// `M⁺ = [[x⁺ + x*y·N*u·x*, x*y·N*], [N*u·x*, N⁺]]`.
/// Cubic in the dimension; agrees with the block formula.
pub fn mat_plus_elim<C: ConwayHemiring>(c: &C, m: &Matrix<C::Elem>) -> Result<Matrix<C::Elem>, MatrixError> {
    let n = m.square()?;
    if n <= 1 {
        return mat_plus_split(c, m, None);
    }
    let x = m.get(0, 0);
    let (y, u, v) = (m.block(0, 1, 1, n), m.block(1, n, 0, 1), m.block(1, n, 1, n));
    let xp = Matrix { rows: 1, cols: 1, entries: vec![c.plus(x)] };
    let y1 = star_then_mat(c, &xp, &y);
    let u1 = then_star_mat(c, &u, &xp);
    let nn = mat_add(c, &v, &mat_mul(c, &u, &y1));
    let np = mat_plus_elim(c, &nn)?;
    let beta = then_star_mat(c, &y1, &np);
    let gamma = star_then_mat(c, &np, &u1);
    let alpha = mat_add(c, &xp, &mat_mul(c, &y1, &gamma));
    Ok(Matrix::from_blocks(&alpha, &beta, &gamma, &np))
}

// ---------------------------------------------------------------------------
// Omega

/// Matrix omega by the block formula: with `P = X + YV*U`,
/// the top part is `P*·YV^ω + P^ω`, the bottom part symmetric.
pub fn mat_omega<P: HemimodulePair>(p: &P, m: &Matrix<Elem<P::H>>) -> Result<Vec<Elem<P::V>>, MatrixError> {
    mat_omega_split(p, m, None)
}

pub fn mat_omega_split<P: HemimodulePair>(
    p: &P,
    m: &Matrix<Elem<P::H>>,
    split: Option<usize>,
) -> Result<Vec<Elem<P::V>>, MatrixError> {
    let c = p.hemiring();
    let n = m.square()?;
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![p.omega(&m.entries[0])]);
    }
    let k = split.unwrap_or(1);
    if k == 0 || k >= n {
        return Err(MatrixError::Split { k, n });
    }
    let (x, y, u, v) = (m.block(0, k, 0, k), m.block(0, k, k, n), m.block(k, n, 0, k), m.block(k, n, k, n));
    let xp = mat_plus(c, &x)?;
    let vp = mat_plus(c, &v)?;
    let pm = mat_add(c, &x, &mat_mul(c, &y, &star_then_mat(c, &vp, &u)));
    let qm = mat_add(c, &v, &mat_mul(c, &u, &star_then_mat(c, &xp, &y)));
    let pp = mat_plus(c, &pm)?;
    let qp = mat_plus(c, &qm)?;
    let top = vec_add(
        p.module(),
        &star_act_vec(p, &pp, &mat_act(p, &y, &mat_omega(p, &v)?)),
        &mat_omega(p, &pm)?,
    );
    let bottom = vec_add(
        p.module(),
        &star_act_vec(p, &qp, &mat_act(p, &u, &mat_omega(p, &x)?)),
        &mat_omega(p, &qm)?,
    );
    Ok(top.into_iter().chain(bottom).collect())
}

/// Matrix omega by eliminating the first index: with `N = V + u·x*y`,
/// the rest is `N^ω + N*u·x^ω` and the first entry `x^ω + x*y·rest`.
pub fn mat_omega_elim<P: HemimodulePair>(p: &P, m: &Matrix<Elem<P::H>>) -> Result<Vec<Elem<P::V>>, MatrixError> {
    let c = p.hemiring();
    let n = m.square()?;
    if n <= 1 {
        return mat_omega(p, m);
    }
    let x = m.get(0, 0);
    let (y, u, v) = (m.block(0, 1, 1, n), m.block(1, n, 0, 1), m.block(1, n, 1, n));
    let xp = Matrix { rows: 1, cols: 1, entries: vec![c.plus(x)] };
    let y1 = star_then_mat(c, &xp, &y);
    let nn = mat_add(c, &v, &mat_mul(c, &u, &y1));
    let np = mat_plus_elim(c, &nn)?;
    let xw = vec![p.omega(x)];
    let rest = vec_add(p.module(), &mat_omega_elim(p, &nn)?, &star_act_vec(p, &np, &mat_act(p, &u, &xw)));
    let first = p.module().add(&xw[0], &mat_act(p, &y1, &rest)[0]);
    Ok(std::iter::once(first).chain(rest).collect())
}

/// `M^{ω,k}`: infinite paths that visit the first `k` indices infinitely
/// often. With `M = [[X, Y], [U, V]]` split at `k` and `P = X + YV*U`,
/// the result is `(P^ω ; V*U·P^ω)`; `k = 0` gives the zero column.
pub fn mat_omega_k<P: HemimodulePair>(p: &P, m: &Matrix<Elem<P::H>>, k: usize) -> Result<Vec<Elem<P::V>>, MatrixError> {
    let c = p.hemiring();
    let n = m.square()?;
    if k > n {
        return Err(MatrixError::Split { k, n });
    }
    if k == 0 {
        return Ok(vec![p.module().zero(); n]);
    }
    if k == n {
        return mat_omega_elim(p, m);
    }
    let (x, y, u, v) = (m.block(0, k, 0, k), m.block(0, k, k, n), m.block(k, n, 0, k), m.block(k, n, k, n));
    let vp = mat_plus_elim(c, &v)?;
    let vsu = star_then_mat(c, &vp, &u);
    let pm = mat_add(c, &x, &mat_mul(c, &y, &vsu));
    let top = mat_omega_elim(p, &pm)?;
    let bottom = mat_act(p, &vsu, &top);
    Ok(top.into_iter().chain(bottom).collect())
}

// ---------------------------------------------------------------------------
// Permutations

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, MatrixError> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(MatrixError::Dimension(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    /// The 0-1 matrix with a 1 at `(i, π(i))`.
    pub fn matrix<C: crate::algebra::Semiring>(&self, c: &C) -> Matrix<C::Elem> {
        let mut m = zeros(c, self.len(), self.len());
        for (i, &j) in self.0.iter().enumerate() {
            m.set(i, j, c.one());
        }
        m
    }
}

/// `π⁻¹Mπ`, computed by reindexing: entry `(π(i), π(j))` of the result is `M_ij`.
pub fn permutation_conjugate<E: Clone>(m: &Matrix<E>, pi: &Permutation) -> Result<Matrix<E>, MatrixError> {
    let n = m.square()?;
    if pi.len() != n {
        return Err(MatrixError::Dimension("permutation size".into()));
    }
    let mut out = m.clone();
    for i in 0..n {
        for j in 0..n {
            out.set(pi.apply(i), pi.apply(j), m.get(i, j).clone());
        }
    }
    Ok(out)
}

/// `π⁻¹v` for a column: entry `π(i)` of the result is `v_i`.
pub fn permute_column<E: Clone>(v: &[E], pi: &Permutation) -> Vec<E> {
    let mut out = v.to_vec();
    for (i, e) in v.iter().enumerate() {
        out[pi.apply(i)] = e.clone();
    }
    out
}

pub fn plus_permutation_check<C: ConwayHemiring>(c: &C, m: &Matrix<C::Elem>, pi: &Permutation) -> Result<Check, MatrixError> {
    let l = mat_plus(c, &permutation_conjugate(m, pi)?)?;
    let r = permutation_conjugate(&mat_plus(c, m)?, pi)?;
    Ok(Check::values(mat_equal(c, &l, &r), render_matrix(c, &l), render_matrix(c, &r)))
}

pub fn omega_permutation_check<P: HemimodulePair>(
    p: &P,
    m: &Matrix<Elem<P::H>>,
    pi: &Permutation,
) -> Result<Check, MatrixError> {
    let v = p.module();
    let l = mat_omega(p, &permutation_conjugate(m, pi)?)?;
    let r = permute_column(&mat_omega(p, m)?, pi);
    let holds = l.iter().zip(&r).all(|(a, b)| v.equal(a, b));
    let show = |xs: &[Elem<P::V>]| xs.iter().map(|e| v.render(e)).collect::<Vec<_>>().join(", ");
    Ok(Check::values(holds, show(&l), show(&r)))
}

// ---------------------------------------------------------------------------
// Groups

/// Finite group on `0..n` with unit 0. Displayed 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    pub name: String,
    n: usize,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

pub const GROUP_NAMES: &[&str] = &["Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "V4", "S3"];

impl GroupTable {
    /// Validates associativity, unit and inverses exhaustively.
    pub fn new(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<Self, MatrixError> {
        let n = table.len();
        let bad = |msg: &str| Err(MatrixError::InvalidGroup(msg.into()));
        if n == 0 || table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return bad("table must be n x n over 0..n");
        }
        if (0..n).any(|i| table[0][i] != i || table[i][0] != i) {
            return bad("element 0 must be the unit");
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return bad("not associative");
                    }
                }
            }
        }
        let mut inverse = Vec::with_capacity(n);
        for (a, row) in table.iter().enumerate() {
            match (0..n).find(|&b| row[b] == 0 && table[b][a] == 0) {
                Some(b) => inverse.push(b),
                None => return bad("missing inverse"),
            }
        }
        Ok(GroupTable { name: name.into(), n, table, inverse })
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        GroupTable::new(format!("Z{n}"), table).expect("cyclic table is a group")
    }

    pub fn klein() -> Self {
        let table = (0..4).map(|i| (0..4).map(|j| i ^ j).collect()).collect();
        GroupTable::new("V4", table).expect("Klein table is a group")
    }

    /// Permutations of three points, listed as e, (123), (132), (12), (13), (23).
    pub fn symmetric3() -> Self {
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 0, 2], [2, 1, 0], [0, 2, 1]];
        let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).expect("closed under composition");
        let table = (0..6)
            .map(|i| (0..6).map(|j| index([0, 1, 2].map(|x| perms[j][perms[i][x]]))).collect())
            .collect();
        GroupTable::new("S3", table).expect("S3 table is a group")
    }

    pub fn by_name(name: &str) -> Result<Self, MatrixError> {
        let upper = name.to_ascii_uppercase();
        match upper.as_str() {
            "V4" => Ok(GroupTable::klein()),
            "S3" => Ok(GroupTable::symmetric3()),
            _ => match upper.strip_prefix('Z').and_then(|k| k.parse::<usize>().ok()) {
                Some(k) if (1..=6).contains(&k) => Ok(GroupTable::cyclic(k)),
                _ => Err(MatrixError::UnknownGroup(name.to_string())),
            },
        }
    }

    /// Every built-in group of order at most `max_order`.
    pub fn builtin(max_order: usize) -> Vec<Self> {
        GROUP_NAMES
            .iter()
            .map(|n| GroupTable::by_name(n).expect("built-in"))
            .filter(|g| g.order() <= max_order)
            .collect()
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }
}

/// `(M_G)_{ij} = x_{i⁻¹j}`.
pub fn group_matrix<E: Clone>(g: &GroupTable, xs: &[E]) -> Result<Matrix<E>, MatrixError> {
    if xs.len() != g.order() {
        return Err(MatrixError::Dimension(format!("{} elements for a group of order {}", xs.len(), g.order())));
    }
    let n = g.order();
    let entries = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| xs[g.mul(g.inv(i), j)].clone()).collect();
    Matrix::new(n, n, entries)
}

/// Plus group identity: every row and column sum of `M_G⁺` equals
/// `(x₁ + ⋯ + xₙ)⁺`.
pub fn group_identity_check<C: ConwayHemiring>(g: &GroupTable, c: &C, sampler: &Sampler<C::Elem>, trials: usize) -> LawReport {
    let n = g.order();
    let laws = vec![Law::new("plus group identity", n, move |xs: &[C::Elem]| {
        let m = mat_plus_elim(c, &group_matrix(g, xs).expect("arity matches")).expect("square");
        let target = c.plus(&c.sum(xs.iter()));
        for i in 0..n {
            let row = c.sum((0..n).map(|j| m.get(i, j)));
            let col = c.sum((0..n).map(|j| m.get(j, i)));
            for s in [row, col] {
                if !c.equal(&s, &target) {
                    return Check::values(false, c.render(&s), c.render(&target));
                }
            }
        }
        Check::values(true, String::new(), String::new())
    })];
    run_laws(&format!("group-identity[{}]", g.name), &laws, sampler, trials, &|e| c.render(e))
}

/// Star group identity in a Conway semiring: row and column sums of `M_G*`
/// equal `(x₁ + ⋯ + xₙ)*`.
pub fn star_group_identity_check<C: ConwaySemiring>(g: &GroupTable, c: &C, sampler: &Sampler<C::Elem>, trials: usize) -> LawReport {
    let n = g.order();
    let laws = vec![Law::new("star group identity", n, move |xs: &[C::Elem]| {
        let m = mat_star(c, &group_matrix(g, xs).expect("arity matches"), None).expect("square");
        let target = c.star(&c.sum(xs.iter()));
        for i in 0..n {
            let row = c.sum((0..n).map(|j| m.get(i, j)));
            let col = c.sum((0..n).map(|j| m.get(j, i)));
            for s in [row, col] {
                if !c.equal(&s, &target) {
                    return Check::values(false, c.render(&s), c.render(&target));
                }
            }
        }
        Check::values(true, String::new(), String::new())
    })];
    run_laws(&format!("star-group-identity[{}]", g.name), &laws, sampler, trials, &|e| c.render(e))
}

/// Omega group identity: every entry of `M_G^ω` equals `(x₁ + ⋯ + xₙ)^ω`.
pub fn omega_group_identity_check<P: HemimodulePair>(
    g: &GroupTable,
    p: &P,
    sampler: &Sampler<Elem<P::H>>,
    trials: usize,
) -> LawReport {
    let n = g.order();
    let (h, v) = (p.hemiring(), p.module());
    let laws = vec![Law::new("omega group identity", n, move |xs: &[Elem<P::H>]| {
        let col = mat_omega_elim(p, &group_matrix(g, xs).expect("arity matches")).expect("square");
        let target = p.omega(&h.sum(xs.iter()));
        match col.iter().find(|e| !v.equal(e, &target)) {
            Some(e) => Check::values(false, v.render(e), v.render(&target)),
            None => Check::values(true, String::new(), String::new()),
        }
    })];
    run_laws(&format!("omega-group-identity[{}]", g.name), &laws, sampler, trials, &|e| h.render(e))
}
