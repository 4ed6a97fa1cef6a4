//! Finite bikei: two binary operations on {1..n} subject to the involutory
//! biquandle axioms, with constructors, axiom checking, enumeration up to
//! isomorphism, and homomorphism search.
//!
//! Elements are stored 0-based internally and rendered 1-based, matching the
//! block-matrix convention for operation tables.

use thiserror::Error;

/// 0-based element of a finite bikei.
pub type Element = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TableError {
    #[error("expected {expected} rows, found {found}")]
    WrongRowCount { expected: usize, found: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    WrongRowLength { row: usize, expected: usize, found: usize },
    #[error("entry {value} at row {row}, column {col} of the {table} table is outside 1..{n}")]
    EntryOutOfRange { table: &'static str, row: usize, col: usize, value: i64, n: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("malformed table: {0}")]
    Malformed(#[from] TableError),
    #[error("bikei axioms violated: {}", crate::algebra::format_violations(.0))]
    Axioms(Vec<Violation>),
    #[error("sigma is not a permutation of 1..{0}")]
    NotPermutation(usize),
    #[error("sigma is not an involution: sigma^2({}) = {}", .witness + 1, .image + 1)]
    NotInvolution { witness: usize, image: usize },
    #[error("{0}")]
    Congruence(String),
    #[error("resource guard exceeded: {0}")]
    GuardExceeded(String),
}

/// Axiom families checked by `verify_axioms`, in reporting order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum AxiomTag {
    I,
    IIi,
    IIii,
    IIiii,
    IIiv,
    IIIi,
    IIIii,
    IIIiii,
}

impl std::fmt::Display for AxiomTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            AxiomTag::I => "(i)",
            AxiomTag::IIi => "(ii.i)",
            AxiomTag::IIii => "(ii.ii)",
            AxiomTag::IIiii => "(ii.iii)",
            AxiomTag::IIiv => "(ii.iv)",
            AxiomTag::IIIi => "(iii.i)",
            AxiomTag::IIIii => "(iii.ii)",
            AxiomTag::IIIiii => "(iii.iii)",
        };
        write!(f, "{s}")
    }
}

/// First lexicographic witness of a violated axiom; elements are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: AxiomTag,
    pub witness: Vec<Element>,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names = ["x", "y", "z"];
        let parts: Vec<String> = self
            .witness
            .iter()
            .enumerate()
            .map(|(i, e)| format!("{}={}", names[i], e + 1))
            .collect();
        write!(f, "axiom {} witness {}", self.axiom, parts.join(", "))
    }
}

pub fn format_violations(vs: &[Violation]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

/// Raw (unvalidated) pair of n x n operation tables, 0-based entries.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OpTables {
    pub n: usize,
    /// under[x * n + y] = x underop y
    pub under: Vec<Element>,
    /// over[x * n + y] = x overop y
    pub over: Vec<Element>,
}

impl OpTables {
    pub fn new(n: usize, under: Vec<Element>, over: Vec<Element>) -> Self {
        assert_eq!(under.len(), n * n);
        assert_eq!(over.len(), n * n);
        OpTables { n, under, over }
    }

    pub fn under(&self, x: Element, y: Element) -> Element {
        self.under[x * self.n + y]
    }

    pub fn over(&self, x: Element, y: Element) -> Element {
        self.over[x * self.n + y]
    }

    /// Relabels by a permutation p (new = p[old]).
    pub fn relabel(&self, p: &[Element]) -> OpTables {
        let n = self.n;
        let mut inv = vec![0; n];
        for (old, &new) in p.iter().enumerate() {
            inv[new] = old;
        }
        let mut under = vec![0; n * n];
        let mut over = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                under[x * n + y] = p[self.under(inv[x], inv[y])];
                over[x * n + y] = p[self.over(inv[x], inv[y])];
            }
        }
        OpTables { n, under, over }
    }

    /// Row-major flattening of the n x 2n block matrix; the comparison key
    /// for canonical class representatives.
    pub fn matrix_key(&self) -> Vec<Element> {
        let n = self.n;
        let mut key = Vec::with_capacity(2 * n * n);
        for x in 0..n {
            for y in 0..n {
                key.push(self.under(x, y));
            }
            for y in 0..n {
                key.push(self.over(x, y));
            }
        }
        key
    }
}

/// The seven axiom families plus (i), evaluated on a complete table.
///
/// The exchange laws (iii) are the standard biquandle ones; the involutory
/// conditions (ii.ii) and (ii.iii) are the strand-reversal identities
///   (x under y) under (y over x) = x   and   (y over x) over (x under y) = y,
/// which together with (ii.i) and (ii.iv) make the crossing relations
/// readable from either side.
fn axiom_check(t: &OpTables, mut report: impl FnMut(AxiomTag, Vec<Element>) -> bool) {
    let n = t.n;
    let u = |x: Element, y: Element| t.under(x, y);
    let o = |x: Element, y: Element| t.over(x, y);

    // (i) diagonal agreement
    for x in 0..n {
        if u(x, x) != o(x, x) && !report(AxiomTag::I, vec![x]) {
            return;
        }
    }
    // (ii)
    'ii_i: for x in 0..n {
        for y in 0..n {
            if o(o(x, y), y) != x {
                if !report(AxiomTag::IIi, vec![x, y]) {
                    return;
                }
                break 'ii_i;
            }
        }
    }
    'ii_ii: for x in 0..n {
        for y in 0..n {
            if u(u(x, y), o(y, x)) != x {
                if !report(AxiomTag::IIii, vec![x, y]) {
                    return;
                }
                break 'ii_ii;
            }
        }
    }
    'ii_iii: for x in 0..n {
        for y in 0..n {
            if o(o(y, x), u(x, y)) != y {
                if !report(AxiomTag::IIiii, vec![x, y]) {
                    return;
                }
                break 'ii_iii;
            }
        }
    }
    'ii_iv: for x in 0..n {
        for y in 0..n {
            if o(x, u(y, x)) != o(x, y) {
                if !report(AxiomTag::IIiv, vec![x, y]) {
                    return;
                }
                break 'ii_iv;
            }
        }
    }
    // (iii) exchange laws
    'iii_i: for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if o(o(x, y), o(z, y)) != o(o(x, z), u(y, z)) {
                    if !report(AxiomTag::IIIi, vec![x, y, z]) {
                        return;
                    }
                    break 'iii_i;
                }
            }
        }
    }
    'iii_ii: for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if o(u(x, y), u(z, y)) != u(o(x, z), o(y, z)) {
                    if !report(AxiomTag::IIIii, vec![x, y, z]) {
                        return;
                    }
                    break 'iii_ii;
                }
            }
        }
    }
    'iii_iii: for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if u(u(x, y), u(z, y)) != u(u(x, z), o(y, z)) {
                    if !report(AxiomTag::IIIiii, vec![x, y, z]) {
                        return;
                    }
                    break 'iii_iii;
                }
            }
        }
    }
}

/// Checks every axiom family, returning the first witness per violated family.
pub fn verify_axioms(t: &OpTables) -> Vec<Violation> {
    let mut out = Vec::new();
    axiom_check(t, |axiom, witness| {
        out.push(Violation { axiom, witness });
        true
    });
    out
}

fn satisfies_axioms(t: &OpTables) -> bool {
    let mut ok = true;
    axiom_check(t, |_, _| {
        ok = false;
        false
    });
    ok
}

/// A validated finite bikei.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bikei {
    tables: OpTables,
}

impl Bikei {
    pub fn new(tables: OpTables) -> Result<Self, AlgebraError> {
        let violations = verify_axioms(&tables);
        if violations.is_empty() {
            Ok(Bikei { tables })
        } else {
            Err(AlgebraError::Axioms(violations))
        }
    }

    pub fn size(&self) -> usize {
        self.tables.n
    }

    pub fn tables(&self) -> &OpTables {
        &self.tables
    }

    /// x underop y (the color a strand picks up passing under).
    pub fn under(&self, x: Element, y: Element) -> Element {
        self.tables.under(x, y)
    }

    /// x overop y.
    pub fn over(&self, x: Element, y: Element) -> Element {
        self.tables.over(x, y)
    }

    /// Solves x underop y = u for x; inverse of the column map.
    pub fn under_inv(&self, u: Element, y: Element) -> Element {
        self.under(u, self.over(y, u))
    }

    /// Solves x overop y = v for x; the column maps of overop are involutions.
    pub fn over_inv(&self, v: Element, y: Element) -> Element {
        self.over(v, y)
    }

    /// True when x overop y = x for all x, y.
    pub fn is_kei(&self) -> bool {
        let n = self.size();
        (0..n).all(|x| (0..n).all(|y| self.over(x, y) == x))
    }

    pub fn relabel(&self, p: &[Element]) -> Bikei {
        Bikei { tables: self.tables.relabel(p) }
    }

    /// Lexicographically least operation matrix over all relabelings.
    pub fn canonical_key(&self) -> Vec<Element> {
        let mut best: Option<Vec<Element>> = None;
        for_each_permutation(self.size(), |p| {
            let key = self.tables.relabel(p).matrix_key();
            if best.as_ref().map_or(true, |b| key < *b) {
                best = Some(key);
            }
        });
        best.expect("at least the identity relabeling")
    }
}

/// Constant action bikei: both operations send x to sigma(x).
pub fn constant_action_bikei(sigma: &[Element]) -> Result<Bikei, AlgebraError> {
    let n = sigma.len();
    let mut seen = vec![false; n];
    for &v in sigma {
        if v >= n || seen[v] {
            return Err(AlgebraError::NotPermutation(n));
        }
        seen[v] = true;
    }
    for x in 0..n {
        if sigma[sigma[x]] != x {
            return Err(AlgebraError::NotInvolution { witness: x, image: sigma[sigma[x]] });
        }
    }
    let mut under = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            under[x * n + y] = sigma[x];
        }
    }
    let over = under.clone();
    Bikei::new(OpTables { n, under, over })
}

/// Alexander bikei on Z/N: x underop y = t*x + (s-t)*y, x overop y = s*x,
/// with residue r living at element index r.
pub fn alexander_bikei(n_modulus: u64, s: u64, t: u64) -> Result<Bikei, AlgebraError> {
    if n_modulus < 2 {
        return Err(AlgebraError::Congruence("modulus must be at least 2".into()));
    }
    let n = n_modulus as i64;
    let s = (s as i64).rem_euclid(n);
    let t = (t as i64).rem_euclid(n);
    let checks: [(&str, i64, i64); 3] = [
        ("s^2", (s * s).rem_euclid(n), 1),
        ("t^2", (t * t).rem_euclid(n), 1),
        ("(1-s)(1-t)", ((1 - s) * (1 - t)).rem_euclid(n), 0),
    ];
    for (name, value, required) in checks {
        if value != required {
            return Err(AlgebraError::Congruence(format!(
                "{name} = {value} != {required} (mod {n})"
            )));
        }
    }
    let nn = n as usize;
    let mut under = vec![0; nn * nn];
    let mut over = vec![0; nn * nn];
    for x in 0..n {
        for y in 0..n {
            under[(x * n + y) as usize] = ((t * x + (s - t) * y).rem_euclid(n)) as usize;
            over[(x * n + y) as usize] = ((s * x).rem_euclid(n)) as usize;
        }
    }
    Bikei::new(OpTables { n: nn, under, over })
}

fn for_each_permutation(n: usize, mut f: impl FnMut(&[Element])) {
    let mut p: Vec<Element> = (0..n).collect();
    // Heap's algorithm, iterative
    let mut c = vec![0usize; n];
    f(&p);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            f(&p);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Isomorphism test by exhaustive permutation search; returns a witness
/// mapping (new = p[old], applied to X to obtain Y) when one exists.
pub fn are_isomorphic(x: &Bikei, y: &Bikei) -> Result<Option<Vec<Element>>, AlgebraError> {
    if x.size() != y.size() {
        return Ok(None);
    }
    let n = x.size();
    if n > 8 {
        return Err(AlgebraError::GuardExceeded(format!(
            "isomorphism search limited to 8 elements, got {n}"
        )));
    }
    let mut witness = None;
    for_each_permutation(n, |p| {
        if witness.is_none() && x.tables.relabel(p) == *y.tables() {
            witness = Some(p.to_vec());
        }
    });
    Ok(witness)
}

/// All valid bikei tables on n elements, in lexicographic matrix order,
/// found by backtracking over table cells with axiom pruning.
pub fn enumerate_bikei_tables(n: usize, max_n: usize) -> Result<Vec<OpTables>, AlgebraError> {
    if n == 0 || n > max_n {
        return Err(AlgebraError::GuardExceeded(format!(
            "enumeration limited to {max_n} elements, got {n}"
        )));
    }
    const UNSET: Element = usize::MAX;
    let mut under = vec![UNSET; n * n];
    let mut over = vec![UNSET; n * n];
    let mut out = Vec::new();

    // cells interleave the two tables so that axiom (i) prunes immediately
    fn cell(slot: usize, n: usize) -> (bool, usize) {
        (slot % 2 == 0, slot / 2 % (n * n))
    }

    fn consistent(n: usize, under: &[Element], over: &[Element]) -> bool {
        const UNSET: Element = usize::MAX;
        let u = |x: usize, y: usize| under[x * n + y];
        let o = |x: usize, y: usize| over[x * n + y];
        // each closure evaluates an op chain, bailing out on unset cells
        macro_rules! eval {
            ($op:ident, $x:expr, $y:expr) => {{
                let (x, y) = ($x, $y);
                if x == UNSET || y == UNSET {
                    UNSET
                } else {
                    $op(x, y)
                }
            }};
        }
        for x in 0..n {
            let a = u(x, x);
            let b = o(x, x);
            if a != UNSET && b != UNSET && a != b {
                return false;
            }
        }
        for x in 0..n {
            for y in 0..n {
                let v = eval!(o, eval!(o, x, y), y);
                if v != UNSET && v != x {
                    return false;
                }
                let v = eval!(u, eval!(u, x, y), eval!(o, y, x));
                if v != UNSET && v != x {
                    return false;
                }
                let v = eval!(o, eval!(o, y, x), eval!(u, x, y));
                if v != UNSET && v != y {
                    return false;
                }
                let a = eval!(o, x, eval!(u, y, x));
                let b = o(x, y);
                if a != UNSET && b != UNSET && a != b {
                    return false;
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let a = eval!(o, eval!(o, x, y), eval!(o, z, y));
                    let b = eval!(o, eval!(o, x, z), eval!(u, y, z));
                    if a != UNSET && b != UNSET && a != b {
                        return false;
                    }
                    let a = eval!(o, eval!(u, x, y), eval!(u, z, y));
                    let b = eval!(u, eval!(o, x, z), eval!(o, y, z));
                    if a != UNSET && b != UNSET && a != b {
                        return false;
                    }
                    let a = eval!(u, eval!(u, x, y), eval!(u, z, y));
                    let b = eval!(u, eval!(u, x, z), eval!(o, y, z));
                    if a != UNSET && b != UNSET && a != b {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn search(
        slot: usize,
        n: usize,
        under: &mut Vec<Element>,
        over: &mut Vec<Element>,
        out: &mut Vec<OpTables>,
    ) {
        if slot == 2 * n * n {
            out.push(OpTables { n, under: under.clone(), over: over.clone() });
            return;
        }
        let (is_under, idx) = cell(slot, n);
        for v in 0..n {
            if is_under {
                under[idx] = v;
            } else {
                over[idx] = v;
            }
            if consistent(n, under, over) {
                search(slot + 1, n, under, over, out);
            }
        }
        if is_under {
            under[idx] = usize::MAX;
        } else {
            over[idx] = usize::MAX;
        }
    }

    search(0, n, &mut under, &mut over, &mut out);
    debug_assert!(out.iter().all(satisfies_axioms));
    out.sort_by(|a, b| a.matrix_key().cmp(&b.matrix_key()));
    Ok(out)
}

/// One bikei per isomorphism class on n elements, each given by its
/// lexicographically least matrix, listed in increasing matrix order.
pub fn enumerate_bikei(n: usize, max_n: usize) -> Result<Vec<Bikei>, AlgebraError> {
    let tables = enumerate_bikei_tables(n, max_n)?;
    let mut reps: Vec<(Vec<Element>, Bikei)> = Vec::new();
    for t in tables {
        let b = Bikei { tables: t };
        let key = b.canonical_key();
        if !reps.iter().any(|(k, _)| *k == key) {
            let canon = tables_from_key(n, &key);
            reps.push((key, Bikei { tables: canon }));
        }
    }
    reps.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(reps.into_iter().map(|(_, b)| b).collect())
}

fn tables_from_key(n: usize, key: &[Element]) -> OpTables {
    let mut under = vec![0; n * n];
    let mut over = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            under[x * n + y] = key[2 * n * x + y];
            over[x * n + y] = key[2 * n * x + n + y];
        }
    }
    OpTables { n, under, over }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixParseError {
    #[error("line 1: expected the element count")]
    MissingHeader,
    #[error("line {line}: cannot parse '{token}' as an integer")]
    BadToken { line: usize, token: String },
    #[error("line {line}: expected {expected} entries, found {found}")]
    WrongEntryCount { line: usize, expected: usize, found: usize },
    #[error("line {line}: entry {value} is outside 1..{n}")]
    EntryOutOfRange { line: usize, value: i64, n: usize },
    #[error("expected {expected} rows, found {found}")]
    MissingRows { expected: usize, found: usize },
}

/// The n x 2n block matrix encoding of a bikei: row j lists x_j underop x_k
/// for k = 1..n, then x_j overop x_k. Round-trips losslessly with `OpTables`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BikeiMatrix {
    pub tables: OpTables,
}

impl BikeiMatrix {
    pub fn from_tables(tables: OpTables) -> Self {
        BikeiMatrix { tables }
    }

    /// Text form: line 1 is n, then n rows of 2n integers with a `|`
    /// separating the two blocks.
    pub fn render(&self) -> String {
        let n = self.tables.n;
        let mut out = format!("{n}\n");
        for x in 0..n {
            let under: Vec<String> =
                (0..n).map(|y| (self.tables.under(x, y) + 1).to_string()).collect();
            let over: Vec<String> =
                (0..n).map(|y| (self.tables.over(x, y) + 1).to_string()).collect();
            out.push_str(&format!("{} | {}\n", under.join(" "), over.join(" ")));
        }
        out
    }

    /// Parses the text form; the `|` separator is accepted and ignored, and
    /// `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self, MatrixParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(MatrixParseError::MissingHeader)?;
        let n: usize = header
            .parse()
            .map_err(|_| MatrixParseError::BadToken { line: hline, token: header.to_string() })?;
        let mut under = vec![0; n * n];
        let mut over = vec![0; n * n];
        let mut rows_read = 0;
        for x in 0..n {
            let (lno, line) = lines
                .next()
                .ok_or(MatrixParseError::MissingRows { expected: n, found: rows_read })?;
            let mut entries = Vec::with_capacity(2 * n);
            for token in line.split_whitespace() {
                if token == "|" {
                    continue;
                }
                let v: i64 = token.parse().map_err(|_| MatrixParseError::BadToken {
                    line: lno,
                    token: token.to_string(),
                })?;
                entries.push((lno, v));
            }
            if entries.len() != 2 * n {
                return Err(MatrixParseError::WrongEntryCount {
                    line: lno,
                    expected: 2 * n,
                    found: entries.len(),
                });
            }
            for (k, (lno, v)) in entries.into_iter().enumerate() {
                if v < 1 || v > n as i64 {
                    return Err(MatrixParseError::EntryOutOfRange { line: lno, value: v, n });
                }
                let e = (v - 1) as usize;
                if k < n {
                    under[x * n + k] = e;
                } else {
                    over[x * n + (k - n)] = e;
                }
            }
            rows_read += 1;
        }
        Ok(BikeiMatrix { tables: OpTables { n, under, over } })
    }
}

/// A bikei homomorphism X -> Y, stored as the image of each element of X.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BikeiHom {
    pub map: Vec<Element>,
}

impl BikeiHom {
    pub fn is_valid(&self, x: &Bikei, y: &Bikei) -> bool {
        let n = x.size();
        if self.map.len() != n || self.map.iter().any(|&v| v >= y.size()) {
            return false;
        }
        for a in 0..n {
            for b in 0..n {
                if self.map[x.under(a, b)] != y.under(self.map[a], self.map[b]) {
                    return false;
                }
                if self.map[x.over(a, b)] != y.over(self.map[a], self.map[b]) {
                    return false;
                }
            }
        }
        true
    }
}

/// Complete list of bikei homomorphisms X -> Y by backtracking, guarded by a
/// node budget.
pub fn enumerate_homomorphisms(
    x: &Bikei,
    y: &Bikei,
    max_nodes: u64,
) -> Result<Vec<BikeiHom>, AlgebraError> {
    let n = x.size();
    let mut map: Vec<Element> = vec![usize::MAX; n];
    let mut out = Vec::new();
    let mut nodes: u64 = 0;

    fn prefix_ok(x: &Bikei, y: &Bikei, map: &[Element], k: usize) -> bool {
        // all pairs among the first k+1 assigned elements whose op results
        // are also assigned must already commute with the map
        for a in 0..=k {
            for b in 0..=k {
                let ux = x.under(a, b);
                if ux <= k && map[ux] != y.under(map[a], map[b]) {
                    return false;
                }
                let ox = x.over(a, b);
                if ox <= k && map[ox] != y.over(map[a], map[b]) {
                    return false;
                }
            }
        }
        true
    }

    fn search(
        k: usize,
        x: &Bikei,
        y: &Bikei,
        map: &mut Vec<Element>,
        out: &mut Vec<BikeiHom>,
        nodes: &mut u64,
        max_nodes: u64,
    ) -> Result<(), AlgebraError> {
        if k == x.size() {
            out.push(BikeiHom { map: map.clone() });
            return Ok(());
        }
        for v in 0..y.size() {
            *nodes += 1;
            if *nodes > max_nodes {
                return Err(AlgebraError::GuardExceeded(format!(
                    "homomorphism search exceeded {max_nodes} nodes"
                )));
            }
            map[k] = v;
            if prefix_ok(x, y, map, k) {
                search(k + 1, x, y, map, out, nodes, max_nodes)?;
            }
        }
        map[k] = usize::MAX;
        Ok(())
    }

    search(0, x, y, &mut map, &mut out, &mut nodes, max_nodes)?;
    debug_assert!(out.iter().all(|h| h.is_valid(x, y)));
    Ok(out)
}
