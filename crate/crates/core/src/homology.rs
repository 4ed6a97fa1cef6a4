//! Bikei homology H_n(X; Z) and cohomology H^n(X; Z/N) of the quotient by
//! the degenerate subcomplex, enumeration of 2-cocycles, and the linear
//! Mochizuki cocycle construction on Alexander bikei.
//!
//! Cohomology over a non-prime modulus is solved by integer Smith reduction
//! of the stacked constraint matrix; no field structure is assumed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::algebra::{alexander_bikei, AlgebraError, Bikei, Element};
use crate::complex::{
    boundary_matrix, degenerate_generators, ChainBasis, ComplexError, DegeneracyMode,
};
use crate::intlinalg::{
    lattice_quotient_presentation, preimage_lattice, solve_integer, solve_mod_kernel,
    AbelianGroupShape, IntMatrix, LinAlgError,
};

#[derive(Debug, Error)]
pub enum HomologyError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(u64),
    #[error("cocycle table has {found} entries, expected {expected}")]
    WrongTableSize { expected: usize, found: usize },
    #[error("mochizuki cocycle conditions failed: {}", .0.join(", "))]
    MochizukiConditions(Vec<String>),
}

/// A 2-cochain X x X -> Z/N together with the bikei it lives on. Values are
/// stored reduced to [0, N).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle2 {
    bikei: Bikei,
    modulus: u64,
    values: Vec<u64>,
}

impl Cocycle2 {
    pub fn new(bikei: Bikei, modulus: u64, values: Vec<u64>) -> Result<Self, HomologyError> {
        if modulus < 2 {
            return Err(HomologyError::BadModulus(modulus));
        }
        let n = bikei.size();
        if values.len() != n * n {
            return Err(HomologyError::WrongTableSize { expected: n * n, found: values.len() });
        }
        let values = values.into_iter().map(|v| v % modulus).collect();
        Ok(Cocycle2 { bikei, modulus, values })
    }

    pub fn bikei(&self) -> &Bikei {
        &self.bikei
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn value(&self, x: Element, y: Element) -> u64 {
        self.values[x * self.bikei.size() + y]
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Text form: line 1 is "n N", then n rows of n residues, row x listing
    /// phi(x, y) for y = 1..n. Round-trips bit-exactly.
    pub fn render(&self) -> String {
        let n = self.bikei.size();
        let mut out = format!("{} {}\n", n, self.modulus);
        for x in 0..n {
            let row: Vec<String> = (0..n).map(|y| self.value(x, y).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the text form against a given bikei.
    pub fn parse(bikei: Bikei, text: &str) -> Result<Self, HomologyError> {
        let mut numbers = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            for token in line.split_whitespace() {
                let v: u64 = token.parse().map_err(|_| HomologyError::WrongTableSize {
                    expected: bikei.size() * bikei.size() + 2,
                    found: 0,
                })?;
                numbers.push(v);
            }
        }
        if numbers.len() < 2 {
            return Err(HomologyError::WrongTableSize { expected: 2, found: numbers.len() });
        }
        let n = numbers[0] as usize;
        let modulus = numbers[1];
        if n != bikei.size() {
            return Err(HomologyError::WrongTableSize { expected: bikei.size(), found: n });
        }
        let values = numbers[2..].to_vec();
        if values.len() != n * n {
            return Err(HomologyError::WrongTableSize { expected: n * n, found: values.len() });
        }
        Cocycle2::new(bikei, modulus, values)
    }
}

/// The degeneracy and cocycle conditions a valid 2-cocycle must satisfy, in
/// checking order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CocycleCondition {
    /// phi(x, x) = 0
    Diagonal,
    /// phi(x, y) = phi(x un y, y ov x)
    Rotation,
    /// phi(x, y) + phi(x, y ov x) = 0
    OverPair,
    /// phi(x, y) + phi(x un y, y) = 0
    UnderPair,
    /// phi applied to every boundary of a 3-chain vanishes
    CocycleIdentity,
}

impl std::fmt::Display for CocycleCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CocycleCondition::Diagonal => "phi(x,x) = 0",
            CocycleCondition::Rotation => "phi(x,y) = phi(x un y, y ov x)",
            CocycleCondition::OverPair => "phi(x,y) + phi(x, y ov x) = 0",
            CocycleCondition::UnderPair => "phi(x,y) + phi(x un y, y) = 0",
            CocycleCondition::CocycleIdentity => "phi(d3(x,y,z)) = 0",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocycleViolation {
    pub condition: CocycleCondition,
    /// 0-based witness elements: (x, y) for degeneracies, (x, y, z) for the
    /// cocycle identity.
    pub witness: Vec<Element>,
    /// offending value of the left-minus-right expression, in [0, N)
    pub value: u64,
}

impl std::fmt::Display for CocycleViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names = ["x", "y", "z"];
        let parts: Vec<String> = self
            .witness
            .iter()
            .enumerate()
            .map(|(i, e)| format!("{}={}", names[i], e + 1))
            .collect();
        write!(f, "{} fails at {} with value {}", self.condition, parts.join(", "), self.value)
    }
}

/// Checks the four degeneracy families, then the cocycle identity evaluated
/// through the degree-3 boundary matrix. Returns the first violation found.
pub fn is_cocycle_2(
    x: &Bikei,
    phi: &[u64],
    modulus: u64,
) -> Result<Option<CocycleViolation>, HomologyError> {
    if modulus < 2 {
        return Err(HomologyError::BadModulus(modulus));
    }
    let n = x.size();
    if phi.len() != n * n {
        return Err(HomologyError::WrongTableSize { expected: n * n, found: phi.len() });
    }
    let m = modulus;
    let val = |a: Element, b: Element| phi[a * n + b] % m;

    for a in 0..n {
        let v = val(a, a);
        if v != 0 {
            return Ok(Some(CocycleViolation {
                condition: CocycleCondition::Diagonal,
                witness: vec![a],
                value: v,
            }));
        }
    }
    for a in 0..n {
        for b in 0..n {
            let v = (val(a, b) + m - val(x.under(a, b), x.over(b, a)) % m) % m;
            if v != 0 {
                return Ok(Some(CocycleViolation {
                    condition: CocycleCondition::Rotation,
                    witness: vec![a, b],
                    value: v,
                }));
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            let v = (val(a, b) + val(a, x.over(b, a))) % m;
            if v != 0 {
                return Ok(Some(CocycleViolation {
                    condition: CocycleCondition::OverPair,
                    witness: vec![a, b],
                    value: v,
                }));
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            let v = (val(a, b) + val(x.under(a, b), b)) % m;
            if v != 0 {
                return Ok(Some(CocycleViolation {
                    condition: CocycleCondition::UnderPair,
                    witness: vec![a, b],
                    value: v,
                }));
            }
        }
    }

    // cocycle identity: phi composed with the boundary of each 3-tuple
    let d3 = boundary_matrix(x, 3)?;
    let basis3 = ChainBasis::new(x, 3)?;
    let basis2 = ChainBasis::new(x, 2)?;
    let mbig = BigInt::from(m);
    for col in 0..basis3.size() {
        let mut acc = BigInt::zero();
        for row in 0..basis2.size() {
            let c = d3.at(row, col);
            if c.is_zero() {
                continue;
            }
            let t = basis2.tuple(row);
            acc += c * BigInt::from(val(t[0], t[1]));
        }
        let rem = acc.mod_floor(&mbig);
        if !rem.is_zero() {
            return Ok(Some(CocycleViolation {
                condition: CocycleCondition::CocycleIdentity,
                witness: basis3.tuple(col),
                value: rem.to_u64().unwrap_or(0),
            }));
        }
    }
    Ok(None)
}

/// Linear Mochizuki cocycle phi(x, y) = a x - a y on the Alexander bikei
/// (N, s, t), subject to 2a = a(1+s) = a(1+t) = a(1-t) = a(s-t-2) = 0.
pub fn mochizuki_cocycle(
    n_modulus: u64,
    s: u64,
    t: u64,
    a: u64,
) -> Result<Cocycle2, HomologyError> {
    let bikei = alexander_bikei(n_modulus, s, t)?;
    let nn = n_modulus as i64;
    let (s, t, a) = (s as i64 % nn, t as i64 % nn, a as i64 % nn);
    let conditions: [(&str, i64); 5] = [
        ("2a = 0", 2 * a),
        ("a(1+s) = 0", a * (1 + s)),
        ("a(1+t) = 0", a * (1 + t)),
        ("a(1-t) = 0", a * (1 - t)),
        ("a(s-t-2) = 0", a * (s - t - 2)),
    ];
    let failing: Vec<String> = conditions
        .iter()
        .filter(|(_, v)| v.rem_euclid(nn) != 0)
        .map(|(name, v)| format!("{name} has value {}", v.rem_euclid(nn)))
        .collect();
    if !failing.is_empty() {
        return Err(HomologyError::MochizukiConditions(failing));
    }
    let n = n_modulus as usize;
    let mut values = vec![0u64; n * n];
    for x in 0..nn {
        for y in 0..nn {
            values[(x * nn + y) as usize] = (a * (x - y)).rem_euclid(nn) as u64;
        }
    }
    let phi = Cocycle2::new(bikei, n_modulus, values)?;
    debug_assert!(is_cocycle_2(phi.bikei(), phi.values(), phi.modulus())
        .expect("table sizes match")
        .is_none());
    Ok(phi)
}

/// Cohomology of the quotient complex in one degree, with representative
/// cocycle tables for its generators.
#[derive(Debug, Clone)]
pub struct CohomologyResult {
    pub degree: usize,
    pub modulus: u64,
    pub group: AbelianGroupShape,
    /// One table per torsion generator of the group, reduced to [0, N) and
    /// sorted lexicographically.
    pub cocycle_basis: Vec<Vec<u64>>,
}

fn n_times_identity(dim: usize, n: u64) -> IntMatrix {
    IntMatrix::from_fn(dim, dim, |i, j| if i == j { BigInt::from(n) } else { BigInt::zero() })
}

/// Generators (as integer columns) of the space of degree-`degree` cochains
/// vanishing on the degenerate subgroup and killed by the next coboundary,
/// i.e. lifts of cocycles mod N.
fn cocycle_kernel_generators(
    x: &Bikei,
    degree: usize,
    modulus: u64,
    mode: DegeneracyMode,
) -> Result<Vec<Vec<BigInt>>, HomologyError> {
    let d_next = boundary_matrix(x, degree + 1)?;
    let g_n = degenerate_generators(x, degree, mode)?;
    let stacked = stack_rows(&d_next.transpose(), &g_n.matrix.transpose());
    Ok(solve_mod_kernel(&stacked, &BigInt::from(modulus)))
}

fn stack_rows(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    assert_eq!(a.cols(), b.cols(), "stack_rows column mismatch");
    IntMatrix::from_fn(a.rows() + b.rows(), a.cols(), |i, j| {
        if i < a.rows() { a.at(i, j).clone() } else { b.at(i - a.rows(), j).clone() }
    })
}

/// Integer generators of the coboundary image in degree `degree`: cochains
/// psi d_degree where psi ranges over degenerate-vanishing cochains one
/// degree down. Empty in degree 1.
fn coboundary_image_generators(
    x: &Bikei,
    degree: usize,
    modulus: u64,
    mode: DegeneracyMode,
) -> Result<Vec<Vec<BigInt>>, HomologyError> {
    if degree == 1 {
        return Ok(Vec::new());
    }
    let g_prev = degenerate_generators(x, degree - 1, mode)?;
    let lower_kernel =
        solve_mod_kernel(&g_prev.matrix.transpose(), &BigInt::from(modulus));
    let d_n = boundary_matrix(x, degree)?;
    let dt = d_n.transpose();
    Ok(lower_kernel.iter().map(|psi| dt.mul_vec(psi)).collect())
}

pub fn bikei_cohomology(
    x: &Bikei,
    degree: usize,
    modulus: u64,
) -> Result<CohomologyResult, HomologyError> {
    bikei_cohomology_with_mode(x, degree, modulus, DegeneracyMode::Bikei)
}

pub fn bikei_cohomology_with_mode(
    x: &Bikei,
    degree: usize,
    modulus: u64,
    mode: DegeneracyMode,
) -> Result<CohomologyResult, HomologyError> {
    if modulus < 2 {
        return Err(HomologyError::BadModulus(modulus));
    }
    let dim = ChainBasis::new(x, degree)?.size();
    let kernel = cocycle_kernel_generators(x, degree, modulus, mode)?;
    let image = coboundary_image_generators(x, degree, modulus, mode)?;

    let n_id = n_times_identity(dim, modulus);
    let l = IntMatrix::from_columns(dim, &kernel).hstack(&n_id);
    let m = IntMatrix::from_columns(dim, &image).hstack(&n_id);
    let pres = lattice_quotient_presentation(dim, &l, &m)?;

    let nbig = BigInt::from(modulus);
    let mut basis: Vec<Vec<u64>> = pres
        .torsion_generators
        .iter()
        .map(|g| g.iter().map(|v| v.mod_floor(&nbig).to_u64().expect("reduced")).collect())
        .collect();
    basis.sort();
    debug_assert!(pres.shape.free_rank == 0, "cohomology over Z/N is finite");
    Ok(CohomologyResult { degree, modulus, group: pres.shape, cocycle_basis: basis })
}

/// True when phi (a valid cocycle table) is a coboundary, i.e. trivial in
/// H^2(X; Z/N).
pub fn is_coboundary_2(x: &Bikei, phi: &Cocycle2) -> Result<bool, HomologyError> {
    let dim = ChainBasis::new(x, 2)?.size();
    let image = coboundary_image_generators(x, 2, phi.modulus(), DegeneracyMode::Bikei)?;
    let m = IntMatrix::from_columns(dim, &image).hstack(&n_times_identity(dim, phi.modulus()));
    let target: Vec<BigInt> = phi.values().iter().map(|&v| BigInt::from(v)).collect();
    Ok(solve_integer(&m, &target).is_some())
}

/// Bikei homology of the quotient complex with integer coefficients:
/// the quotient of { c : d c lands in the degenerate subgroup one degree
/// down } by boundaries plus degenerates.
pub fn bikei_homology(x: &Bikei, degree: usize) -> Result<AbelianGroupShape, HomologyError> {
    bikei_homology_with_mode(x, degree, DegeneracyMode::Bikei)
}

pub fn bikei_homology_with_mode(
    x: &Bikei,
    degree: usize,
    mode: DegeneracyMode,
) -> Result<AbelianGroupShape, HomologyError> {
    let dim = ChainBasis::new(x, degree)?.size();
    let d_n = boundary_matrix(x, degree)?;
    let g_prev = if degree == 1 {
        IntMatrix::zero(0, 0)
    } else {
        degenerate_generators(x, degree - 1, mode)?.matrix
    };
    let cycles = preimage_lattice(&d_n, &g_prev);
    let d_next = boundary_matrix(x, degree + 1)?;
    let g_n = degenerate_generators(x, degree, mode)?.matrix;
    let boundaries = d_next.hstack(&g_n);
    Ok(lattice_quotient_presentation(dim, &cycles, &boundaries)?.shape)
}

/// Deterministic report of the free rank of H_2(X; Z) for every bikei class
/// with at most `max_n` elements. The interesting question is whether any
/// free part ever appears; the report only states what was computed.
pub fn conjecture_scan(max_n: usize) -> Result<String, HomologyError> {
    let mut out = String::from(
        "# free rank of H2 with integer coefficients, one bikei class per line\n# class\tfree_rank\tH2\n",
    );
    for n in 1..=max_n {
        let classes = crate::algebra::enumerate_bikei(n, max_n.max(4))?;
        for (i, b) in classes.iter().enumerate() {
            let h = bikei_homology(b, 2)?;
            out.push_str(&format!("{}.{}\t{}\t{}\n", n, i + 1, h.free_rank, h));
        }
    }
    Ok(out)
}
