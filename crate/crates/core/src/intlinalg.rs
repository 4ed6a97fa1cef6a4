//! Exact integer linear algebra: Smith normal form, kernels, preimage
//! lattices, lattice quotients and solving linear systems over Z/N.
//!
//! All arithmetic uses arbitrary-precision integers; intermediate entries in
//! a Smith reduction can grow well past the input magnitudes even for tiny
//! matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("generator column {column} does not lie in the ambient lattice")]
    NotInSpan { column: usize },
}

/// Dense rectangular integer matrix, row-major. Zero rows or columns are
/// legal; both arise naturally as boundary maps at the ends of a complex.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.at(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut m = Self::zero(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(ambient: usize, cols: &[Vec<BigInt>]) -> Self {
        assert!(cols.iter().all(|c| c.len() == ambient), "column length mismatch");
        Self::from_fn(ambient, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols { self.at(i, j).clone() } else { other.at(i, j - self.cols).clone() }
        })
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "mul dimension mismatch");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.at(k, j);
                    if !add.is_zero() {
                        let cur = out.at(i, j) + add;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "mul_vec dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j) * &v[j]).sum())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row_mul(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let add = q * self.at(src, c);
            let v = self.at(dst, c) + add;
            self.set(dst, c, v);
        }
    }

    /// col[dst] += q * col[src]
    fn add_col_mul(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let add = q * self.at(r, src);
            let v = self.at(r, dst) + add;
            self.set(r, dst, v);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.at(r, c);
            self.set(r, c, v);
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.at(k, k).is_zero() {
                match (k + 1..n).find(|&r| !m.at(r, k).is_zero()) {
                    Some(r) => {
                        m.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j)) / &prev;
                    m.set(i, j, v);
                }
                m.set(i, k, BigInt::zero());
            }
            prev = m.at(k, k).clone();
        }
        sign * m.at(n - 1, n - 1)
    }
}

/// U * M * V = D with U, V unimodular and D diagonal satisfying the
/// divisibility chain d1 | d2 | ... . Inverses are tracked during the
/// reduction so callers can change bases without re-solving.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d.at(i, i).clone()).collect()
    }
}

/// Finds the position of the smallest nonzero absolute value in the trailing
/// submatrix starting at (k, k); ties broken by row-major order.
fn pivot_position(m: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for r in k..m.rows() {
        for c in k..m.cols() {
            let v = m.at(r, c);
            if v.is_zero() {
                continue;
            }
            match best {
                None => best = Some((r, c)),
                Some((br, bc)) => {
                    if v.abs() < m.at(br, bc).abs() {
                        best = Some((r, c));
                    }
                }
            }
        }
    }
    best
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut u_inv = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);
    let mut k = 0;

    while k < rows.min(cols) {
        let Some((pr, pc)) = pivot_position(&d, k) else { break };
        // move pivot to (k, k)
        d.swap_rows(k, pr);
        u.swap_rows(k, pr);
        u_inv.swap_cols(k, pr);
        d.swap_cols(k, pc);
        v.swap_cols(k, pc);
        v_inv.swap_rows(k, pc);

        // clear row and column k; restart if a remainder re-dirties them
        loop {
            let mut dirty = false;
            for r in k + 1..rows {
                if d.at(r, k).is_zero() {
                    continue;
                }
                let q = -(d.at(r, k) / d.at(k, k));
                d.add_row_mul(r, k, &q);
                u.add_row_mul(r, k, &q);
                u_inv.add_col_mul(k, r, &(-&q));
                if !d.at(r, k).is_zero() {
                    // remainder left behind; it is smaller than the pivot
                    d.swap_rows(k, r);
                    u.swap_rows(k, r);
                    u_inv.swap_cols(k, r);
                    dirty = true;
                }
            }
            for c in k + 1..cols {
                if d.at(k, c).is_zero() {
                    continue;
                }
                let q = -(d.at(k, c) / d.at(k, k));
                d.add_col_mul(c, k, &q);
                v.add_col_mul(c, k, &q);
                v_inv.add_row_mul(k, c, &(-&q));
                if !d.at(k, c).is_zero() {
                    d.swap_cols(k, c);
                    v.swap_cols(k, c);
                    v_inv.swap_rows(k, c);
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }

        // enforce divisibility: pivot must divide the trailing submatrix
        let mut fixed = false;
        'scan: for r in k + 1..rows {
            for c in k + 1..cols {
                if !(d.at(r, c) % d.at(k, k)).is_zero() {
                    let one = BigInt::one();
                    d.add_row_mul(k, r, &one);
                    u.add_row_mul(k, r, &one);
                    u_inv.add_col_mul(r, k, &(-&one));
                    fixed = true;
                    break 'scan;
                }
            }
        }
        if fixed {
            continue; // redo this pivot with the contaminated row
        }

        if d.at(k, k).is_negative() {
            d.negate_row(k);
            u.negate_row(k);
            u_inv.negate_col(k);
        }
        k += 1;
    }

    let rank = (0..rows.min(cols)).take_while(|&i| !d.at(i, i).is_zero()).count();
    let out = SmithDecomposition { u, u_inv, d, v, v_inv, rank };
    debug_assert!(verify_smith(m, &out), "smith decomposition identity violated");
    out
}

impl IntMatrix {
    fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = -self.at(r, c);
            self.set(r, c, v);
        }
    }
}

fn verify_smith(m: &IntMatrix, s: &SmithDecomposition) -> bool {
    // U M V = D is checked as M V = U^-1 D; the right side is cheap to form
    // because D is diagonal (column j of U^-1 scaled by d_j).
    let mv = m.mul(&s.v);
    let rhs = IntMatrix::from_fn(m.rows(), m.cols(), |i, j| {
        if j < s.rank { s.u_inv.at(i, j) * s.d.at(j, j) } else { BigInt::zero() }
    });
    if mv != rhs {
        return false;
    }
    for i in 0..s.rank.saturating_sub(1) {
        if !(s.d.at(i + 1, i + 1) % s.d.at(i, i)).is_zero() {
            return false;
        }
    }
    true
}

/// Columns spanning ker(M) over the integers.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    if m.rows() == 0 {
        return IntMatrix::identity(m.cols());
    }
    let s = smith_normal_form(m);
    let cols: Vec<Vec<BigInt>> = (s.rank..m.cols()).map(|i| s.v.column(i)).collect();
    IntMatrix::from_columns(m.cols(), &cols)
}

/// Solves M x = b over the integers, if possible.
pub fn solve_integer(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(m.rows(), b.len(), "solve_integer dimension mismatch");
    let s = smith_normal_form(m);
    let c = s.u.mul_vec(b);
    let mut y = vec![BigInt::zero(); m.cols()];
    for (i, ci) in c.iter().enumerate() {
        if i < s.rank {
            let di = s.d.at(i, i);
            if !(ci % di).is_zero() {
                return None;
            }
            y[i] = ci / di;
        } else if !ci.is_zero() {
            return None;
        }
    }
    Some(s.v.mul_vec(&y))
}

/// True when every column of `m` lies in the integer column span of `l`.
pub fn spans_contain(l: &IntMatrix, m: &IntMatrix) -> bool {
    (0..m.cols()).all(|c| solve_integer(l, &m.column(c)).is_some())
}

/// Canonical form of a finitely generated abelian group: free rank plus the
/// invariant-factor torsion chain d1 | d2 | ... with each di >= 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroupShape {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroupShape {
    pub fn trivial() -> Self {
        AbelianGroupShape { free_rank: 0, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Order of the group, when finite.
    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank > 0 {
            return None;
        }
        Some(self.torsion.iter().product::<BigInt>().max(BigInt::one()))
    }
}

impl std::fmt::Display for AbelianGroupShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// The quotient L/M together with ambient-space vectors generating it:
/// one generator per torsion factor (same order as `shape.torsion`),
/// then one per free summand.
#[derive(Clone, Debug)]
pub struct QuotientPresentation {
    pub shape: AbelianGroupShape,
    pub torsion_generators: Vec<Vec<BigInt>>,
    pub free_generators: Vec<Vec<BigInt>>,
}

/// Shape of L/M for lattices M <= L <= Z^ambient given by generator columns.
pub fn lattice_quotient(
    ambient: usize,
    l: &IntMatrix,
    m: &IntMatrix,
) -> Result<AbelianGroupShape, LinAlgError> {
    Ok(lattice_quotient_presentation(ambient, l, m)?.shape)
}

pub fn lattice_quotient_presentation(
    ambient: usize,
    l: &IntMatrix,
    m: &IntMatrix,
) -> Result<QuotientPresentation, LinAlgError> {
    if l.rows() != ambient || m.rows() != ambient {
        return Err(LinAlgError::DimensionMismatch(format!(
            "ambient rank {} vs generator rows {} / {}",
            ambient,
            l.rows(),
            m.rows()
        )));
    }
    let sl = smith_normal_form(l);
    let rank_l = sl.rank;

    // basis of span(L): b_i = d_i * (U^-1 e_i)
    let basis: Vec<Vec<BigInt>> = (0..rank_l)
        .map(|i| {
            let col = sl.u_inv.column(i);
            col.into_iter().map(|x| x * sl.d.at(i, i)).collect()
        })
        .collect();

    // coordinates of each column of M in that basis
    let mut coords = IntMatrix::zero(rank_l, m.cols());
    for c in 0..m.cols() {
        let um = sl.u.mul_vec(&m.column(c));
        for (i, val) in um.iter().enumerate() {
            if i < rank_l {
                let di = sl.d.at(i, i);
                if !(val % di).is_zero() {
                    return Err(LinAlgError::NotInSpan { column: c });
                }
                coords.set(i, c, val / di);
            } else if !val.is_zero() {
                return Err(LinAlgError::NotInSpan { column: c });
            }
        }
    }

    let sc = smith_normal_form(&coords);
    let mut torsion = Vec::new();
    let mut torsion_generators = Vec::new();
    let basis_mat = IntMatrix::from_columns(ambient, &basis);
    for i in 0..sc.rank {
        let e = sc.d.at(i, i).clone();
        if e > BigInt::one() {
            let gen_coord = sc.u_inv.column(i);
            torsion_generators.push(basis_mat.mul_vec(&gen_coord));
            torsion.push(e);
        }
    }
    let mut free_generators = Vec::new();
    for i in sc.rank..rank_l {
        let gen_coord = sc.u_inv.column(i);
        free_generators.push(basis_mat.mul_vec(&gen_coord));
    }
    let shape = AbelianGroupShape { free_rank: rank_l - sc.rank, torsion };
    Ok(QuotientPresentation { shape, torsion_generators, free_generators })
}

/// Columns spanning { v : A v lies in span(L) }. Always contains ker A.
pub fn preimage_lattice(a: &IntMatrix, l: &IntMatrix) -> IntMatrix {
    assert_eq!(a.rows(), l.rows(), "preimage_lattice row mismatch");
    if a.rows() == 0 {
        return IntMatrix::identity(a.cols());
    }
    let neg_l = IntMatrix::from_fn(l.rows(), l.cols(), |i, j| -l.at(i, j));
    let block = a.hstack(&neg_l);
    let ker = kernel_basis(&block);
    // project kernel columns onto the A-variable block
    IntMatrix::from_fn(a.cols(), ker.cols(), |i, j| ker.at(i, j).clone())
}

/// Kernel and image of A over Z/N.
#[derive(Clone, Debug)]
pub struct ModKernel {
    pub modulus: BigInt,
    /// Generators of { x in (Z/N)^cols : A x = 0 }, reduced to [0, N).
    pub kernel_generators: Vec<Vec<BigInt>>,
    /// Shape of the image subgroup of (Z/N)^rows.
    pub image: AbelianGroupShape,
}

/// Generators of { x in (Z/N)^cols : A x = 0 } without the image summary;
/// cheap even when A has many rows.
pub fn solve_mod_kernel(a: &IntMatrix, n: &BigInt) -> Vec<Vec<BigInt>> {
    assert!(*n >= BigInt::from(2), "modulus must be at least 2");
    let s = smith_normal_form(a);
    let mut gens = Vec::new();
    for i in 0..a.cols() {
        let mult = if i < s.rank { n / s.d.at(i, i).gcd(n) } else { BigInt::one() };
        if (&mult % n).is_zero() {
            continue;
        }
        let col = s.v.column(i);
        let g: Vec<BigInt> = col.iter().map(|x| (x * &mult).mod_floor(n)).collect();
        if g.iter().any(|x| !x.is_zero()) {
            gens.push(g);
        }
    }
    gens
}

pub fn solve_mod(a: &IntMatrix, n: &BigInt) -> ModKernel {
    let gens = solve_mod_kernel(a, n);
    let image = if a.rows() == 0 {
        AbelianGroupShape::trivial()
    } else {
        let n_lattice = IntMatrix::from_fn(a.rows(), a.rows(), |i, j| {
            if i == j { n.clone() } else { BigInt::zero() }
        });
        let l = a.hstack(&n_lattice);
        lattice_quotient(a.rows(), &l, &n_lattice).expect("N-lattice is contained in A + N")
    };
    ModKernel { modulus: n.clone(), kernel_generators: gens, image }
}
