//! Bikei colorings of diagrams, Boltzmann weights, and the counting and
//! 2-cocycle enhanced invariants for links and marked-vertex surface
//! diagrams.

use std::collections::BTreeMap;
use thiserror::Error;

use crate::algebra::{Bikei, Element};
use crate::diagram::{Diagram, SemiarcId};
use crate::homology::{is_cocycle_2, Cocycle2, CocycleViolation, HomologyError};

pub const DEFAULT_MAX_NODES: u64 = 10_000_000;

#[derive(Debug, Error)]
pub enum InvariantError {
    #[error("coloring search exceeded the budget of {0} nodes")]
    GuardExceeded(u64),
    #[error("refusing to evaluate an invalid cocycle: {0}")]
    InvalidCocycle(CocycleViolation),
    #[error("the cocycle is defined over a different bikei than the coloring one")]
    MismatchedBikei,
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

/// An assignment of bikei elements to semiarcs satisfying every crossing
/// relation and saddle equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Coloring {
    pub assignment: BTreeMap<SemiarcId, Element>,
}

impl Coloring {
    pub fn color(&self, id: SemiarcId) -> Element {
        self.assignment[&id]
    }
}

struct Solver<'a> {
    diagram: &'a Diagram,
    bikei: &'a Bikei,
    ids: Vec<SemiarcId>,
    index: BTreeMap<SemiarcId, usize>,
    nodes: u64,
    max_nodes: u64,
}

impl<'a> Solver<'a> {
    fn new(diagram: &'a Diagram, bikei: &'a Bikei, max_nodes: u64) -> Self {
        let ids: Vec<SemiarcId> = diagram.semiarcs().into_iter().collect();
        let index = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        Solver { diagram, bikei, ids, index, nodes: 0, max_nodes }
    }

    fn put(
        &self,
        colors: &mut [Option<Element>],
        id: SemiarcId,
        value: Element,
        changed: &mut bool,
    ) -> bool {
        let slot = self.index[&id];
        match colors[slot] {
            Some(v) => v == value,
            None => {
                colors[slot] = Some(value);
                *changed = true;
                true
            }
        }
    }

    fn get(&self, colors: &[Option<Element>], id: SemiarcId) -> Option<Element> {
        colors[self.index[&id]]
    }

    /// Fixpoint propagation; strand-reversal axioms make every mixed pair of
    /// known endpoints determine the remaining two.
    fn propagate(&self, colors: &mut [Option<Element>]) -> bool {
        let x = self.bikei;
        loop {
            let mut changed = false;
            for c in &self.diagram.crossings {
                let ui = self.get(colors, c.u_in);
                let oi = self.get(colors, c.o_in);
                let uo = self.get(colors, c.u_out);
                let oo = self.get(colors, c.o_out);
                let ok = match (ui, oi, uo, oo) {
                    (Some(a), Some(b), _, _) => {
                        self.put(colors, c.u_out, x.under(a, b), &mut changed)
                            && self.put(colors, c.o_out, x.over(b, a), &mut changed)
                    }
                    (_, _, Some(cv), Some(dv)) => {
                        self.put(colors, c.u_in, x.under(cv, dv), &mut changed)
                            && self.put(colors, c.o_in, x.over(dv, cv), &mut changed)
                    }
                    (Some(a), _, _, Some(dv)) => {
                        self.put(colors, c.o_in, x.over(dv, a), &mut changed)
                    }
                    (_, Some(b), Some(cv), _) => {
                        self.put(colors, c.u_in, x.under_inv(cv, b), &mut changed)
                    }
                    _ => true,
                };
                if !ok {
                    return false;
                }
            }
            for s in &self.diagram.saddles {
                if let Some(v) = s.ends.iter().find_map(|&e| self.get(colors, e)) {
                    for &e in &s.ends {
                        if !self.put(colors, e, v, &mut changed) {
                            return false;
                        }
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn satisfied(&self, colors: &[Option<Element>]) -> bool {
        let x = self.bikei;
        let val = |id: SemiarcId| colors[self.index[&id]].expect("complete assignment");
        self.diagram.crossings.iter().all(|c| {
            val(c.u_out) == x.under(val(c.u_in), val(c.o_in))
                && val(c.o_out) == x.over(val(c.o_in), val(c.u_in))
        }) && self
            .diagram
            .saddles
            .iter()
            .all(|s| s.ends.iter().all(|&e| val(e) == val(s.ends[0])))
    }

    fn search(
        &mut self,
        colors: &mut Vec<Option<Element>>,
        out: &mut Vec<Coloring>,
    ) -> Result<(), InvariantError> {
        if !self.propagate(colors) {
            return Ok(());
        }
        let Some(slot) = colors.iter().position(Option::is_none) else {
            if self.satisfied(colors) {
                let assignment = self
                    .ids
                    .iter()
                    .enumerate()
                    .map(|(i, &id)| (id, colors[i].unwrap()))
                    .collect();
                out.push(Coloring { assignment });
            }
            return Ok(());
        };
        for v in 0..self.bikei.size() {
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                return Err(InvariantError::GuardExceeded(self.max_nodes));
            }
            let mut branch = colors.clone();
            branch[slot] = Some(v);
            self.search(&mut branch, out)?;
        }
        Ok(())
    }
}

/// Complete list of colorings in lexicographic assignment order.
pub fn enumerate_colorings(
    diagram: &Diagram,
    bikei: &Bikei,
    max_nodes: u64,
) -> Result<Vec<Coloring>, InvariantError> {
    let mut solver = Solver::new(diagram, bikei, max_nodes);
    let mut colors: Vec<Option<Element>> = vec![None; solver.ids.len()];
    let mut out = Vec::new();
    solver.search(&mut colors, &mut out)?;
    out.sort();
    out.dedup();
    Ok(out)
}

pub fn counting_invariant(
    diagram: &Diagram,
    bikei: &Bikei,
    max_nodes: u64,
) -> Result<usize, InvariantError> {
    Ok(enumerate_colorings(diagram, bikei, max_nodes)?.len())
}

/// Sum over classical crossings of phi(under-in color, over-in color);
/// saddles and loops contribute nothing.
pub fn boltzmann_weight(diagram: &Diagram, coloring: &Coloring, phi: &Cocycle2) -> u64 {
    let mut acc = 0u64;
    for c in &diagram.crossings {
        acc = (acc + phi.value(coloring.color(c.u_in), coloring.color(c.o_in))) % phi.modulus();
    }
    acc
}

/// Multiset of Boltzmann weights over a coefficient group, with a
/// generating-function rendering in the dummy variable u.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantValue {
    pub modulus: u64,
    pub multiset: BTreeMap<u64, usize>,
}

impl InvariantValue {
    pub fn total_multiplicity(&self) -> usize {
        self.multiset.values().sum()
    }

    /// Ascending-exponent polynomial, e.g. "8 + 8u^4"; the u^0 factor is
    /// omitted and an empty multiset renders as "0".
    pub fn polynomial(&self) -> String {
        if self.multiset.is_empty() {
            return "0".to_string();
        }
        let terms: Vec<String> = self
            .multiset
            .iter()
            .map(|(&w, &m)| {
                if w == 0 {
                    format!("{m}")
                } else if m == 1 {
                    format!("u^{w}")
                } else {
                    format!("{m}u^{w}")
                }
            })
            .collect();
        terms.join(" + ")
    }

    /// Canonical multi-line form: count, polynomial, then the sorted
    /// (weight: multiplicity) pairs.
    pub fn serialize(&self) -> String {
        let mut out = format!("count = {}\npoly = {}\n", self.total_multiplicity(), self.polynomial());
        for (w, m) in &self.multiset {
            out.push_str(&format!("{w}: {m}\n"));
        }
        out
    }
}

/// The 2-cocycle enhanced counting invariant. The cocycle is re-validated on
/// entry; an invalid table would silently produce non-invariant numbers.
pub fn cocycle_invariant(
    diagram: &Diagram,
    bikei: &Bikei,
    phi: &Cocycle2,
    max_nodes: u64,
) -> Result<InvariantValue, InvariantError> {
    if bikei != phi.bikei() {
        return Err(InvariantError::MismatchedBikei);
    }
    if let Some(violation) = is_cocycle_2(bikei, phi.values(), phi.modulus())? {
        return Err(InvariantError::InvalidCocycle(violation));
    }
    let colorings = enumerate_colorings(diagram, bikei, max_nodes)?;
    let mut multiset: BTreeMap<u64, usize> = BTreeMap::new();
    for c in &colorings {
        *multiset.entry(boltzmann_weight(diagram, c, phi)).or_insert(0) += 1;
    }
    Ok(InvariantValue { modulus: phi.modulus(), multiset })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{alexander_bikei, constant_action_bikei};
    use crate::homology::mochizuki_cocycle;

    fn z8_31() -> Bikei {
        alexander_bikei(8, 3, 1).unwrap()
    }

    fn switch_z2() -> Bikei {
        constant_action_bikei(&[1, 0]).unwrap()
    }

    fn phi4() -> Cocycle2 {
        mochizuki_cocycle(8, 3, 1, 4).unwrap()
    }

    fn vhopf() -> Diagram {
        Diagram::parse("X 1 2 1 2\n").unwrap()
    }

    fn hopf() -> Diagram {
        Diagram::parse("X 1 3 2 4\nX 4 2 3 1\n").unwrap()
    }

    fn unknot() -> Diagram {
        Diagram::parse("O 1\n").unwrap()
    }

    /// Brute-force oracle: try every assignment of elements to semiarcs.
    fn brute_force_colorings(d: &Diagram, x: &Bikei) -> Vec<Coloring> {
        let ids: Vec<SemiarcId> = d.semiarcs().into_iter().collect();
        let n = x.size();
        let mut out = Vec::new();
        let total = (n as u64).pow(ids.len() as u32);
        for code in 0..total {
            let mut c = code;
            let mut assignment = BTreeMap::new();
            for &id in &ids {
                assignment.insert(id, (c % n as u64) as Element);
                c /= n as u64;
            }
            let coloring = Coloring { assignment };
            let ok = d.crossings.iter().all(|cr| {
                coloring.color(cr.u_out) == x.under(coloring.color(cr.u_in), coloring.color(cr.o_in))
                    && coloring.color(cr.o_out)
                        == x.over(coloring.color(cr.o_in), coloring.color(cr.u_in))
            }) && d
                .saddles
                .iter()
                .all(|s| s.ends.iter().all(|&e| coloring.color(e) == coloring.color(s.ends[0])));
            if ok {
                out.push(coloring);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn virtual_hopf_has_sixteen_colorings() {
        let cs = enumerate_colorings(&vhopf(), &z8_31(), DEFAULT_MAX_NODES).unwrap();
        assert_eq!(cs.len(), 16);
        assert_eq!(cs, brute_force_colorings(&vhopf(), &z8_31()));
        // y ranges over {0, 4}, x free
        for c in &cs {
            assert!(c.color(2) == 0 || c.color(2) == 4);
        }
    }

    #[test]
    fn hopf_has_sixteen_colorings() {
        let cs = enumerate_colorings(&hopf(), &z8_31(), DEFAULT_MAX_NODES).unwrap();
        assert_eq!(cs.len(), 16);
        assert_eq!(cs, brute_force_colorings(&hopf(), &z8_31()));
    }

    #[test]
    fn switch_bikei_counts() {
        // the virtual Hopf link admits no switch colorings
        assert_eq!(counting_invariant(&vhopf(), &switch_z2(), 1 << 20).unwrap(), 0);
        // each Hopf component flips parity twice around, leaving two free
        // parity choices; brute force confirms
        let brute = brute_force_colorings(&hopf(), &switch_z2());
        let fast = enumerate_colorings(&hopf(), &switch_z2(), 1 << 20).unwrap();
        assert_eq!(fast, brute);
        assert_eq!(fast.len(), 4);
    }

    #[test]
    fn unknot_colorings_are_free() {
        for x in [z8_31(), switch_z2()] {
            assert_eq!(counting_invariant(&unknot(), &x, 1 << 20).unwrap(), x.size());
        }
    }

    #[test]
    fn virtual_hopf_boltzmann_weights() {
        let phi = phi4();
        let cs = enumerate_colorings(&vhopf(), &z8_31(), 1 << 20).unwrap();
        for c in cs {
            let w = boltzmann_weight(&vhopf(), &c, &phi);
            let expected = if c.color(1) % 2 == 1 { 4 } else { 0 };
            assert_eq!(w, expected, "weight of x={} y={}", c.color(1), c.color(2));
        }
    }

    #[test]
    fn virtual_hopf_invariant_polynomial() {
        let v = cocycle_invariant(&vhopf(), &z8_31(), &phi4(), 1 << 20).unwrap();
        assert_eq!(v.polynomial(), "8 + 8u^4");
        assert_eq!(v.total_multiplicity(), 16);
    }

    #[test]
    fn hopf_invariant_is_constant_sixteen() {
        let v = cocycle_invariant(&hopf(), &z8_31(), &phi4(), 1 << 20).unwrap();
        assert_eq!(v.polynomial(), "16");
        // every coloring picks up cancelling weights at the two crossings
        assert_eq!(v.multiset.get(&0), Some(&16));
    }

    #[test]
    fn unknot_invariant() {
        let v = cocycle_invariant(&unknot(), &z8_31(), &phi4(), 1 << 20).unwrap();
        assert_eq!(v.polynomial(), "8");
    }

    #[test]
    fn invalid_cocycle_is_refused() {
        let x = z8_31();
        let mut values = vec![0u64; 64];
        for a in 0..8u64 {
            for b in 0..8u64 {
                values[(a * 8 + b) as usize] = (a + 8 - b) % 8;
            }
        }
        let phi = Cocycle2::new(x.clone(), 8, values).unwrap();
        let err = cocycle_invariant(&vhopf(), &x, &phi, 1 << 20).unwrap_err();
        assert!(matches!(err, InvariantError::InvalidCocycle(_)));
    }

    #[test]
    fn mismatched_bikei_is_refused() {
        let err = cocycle_invariant(&vhopf(), &switch_z2(), &phi4(), 1 << 20).unwrap_err();
        assert!(matches!(err, InvariantError::MismatchedBikei));
    }

    #[test]
    fn enhancement_consistency() {
        for d in [vhopf(), hopf(), unknot()] {
            let count = counting_invariant(&d, &z8_31(), 1 << 20).unwrap();
            let v = cocycle_invariant(&d, &z8_31(), &phi4(), 1 << 20).unwrap();
            assert_eq!(v.total_multiplicity(), count);
        }
    }

    #[test]
    fn crossing_rotation_preserves_solutions_and_multisets() {
        let phi = phi4();
        for d in [vhopf(), hopf()] {
            let base_cs = enumerate_colorings(&d, &z8_31(), 1 << 20).unwrap();
            let base_v = cocycle_invariant(&d, &z8_31(), &phi, 1 << 20).unwrap();
            for i in 0..d.crossings.len() {
                let r = d.rotate_crossing(i);
                let cs = enumerate_colorings(&r, &z8_31(), 1 << 20).unwrap();
                assert_eq!(cs, base_cs, "solution set changed under rotation of {i}");
                let v = cocycle_invariant(&r, &z8_31(), &phi, 1 << 20).unwrap();
                assert_eq!(v, base_v, "multiset changed under rotation of {i}");
            }
        }
    }

    #[test]
    fn saddle_forces_equal_colors() {
        let d = Diagram::parse("S 1 1 2 2\n").unwrap();
        let cs = enumerate_colorings(&d, &z8_31(), 1 << 20).unwrap();
        assert_eq!(cs.len(), 8);
        for c in cs {
            assert_eq!(c.color(1), c.color(2));
        }
    }

    #[test]
    fn surface_move_weight_identities() {
        // saddle slide and double-saddle moves contribute degenerate weight
        // pairs, which vanish for every valid cocycle
        let phi = phi4();
        let x = phi.bikei().clone();
        let m = phi.modulus();
        for a in 0..x.size() {
            for b in 0..x.size() {
                let move_iv = (phi.value(a, b) + phi.value(a, x.over(b, a))) % m;
                assert_eq!(move_iv, 0);
                let move_viii_l =
                    (2 * phi.value(b, a) + 2 * phi.value(b, x.over(a, b))) % m;
                let move_viii_r =
                    (2 * phi.value(a, b) + 2 * phi.value(a, x.over(b, a))) % m;
                assert_eq!(move_viii_l, 0);
                assert_eq!(move_viii_r, 0);
            }
        }
    }

    #[test]
    fn polynomial_rendering() {
        let v = InvariantValue {
            modulus: 8,
            multiset: [(0u64, 3usize), (2, 1), (5, 4)].into_iter().collect(),
        };
        assert_eq!(v.polynomial(), "3 + u^2 + 4u^5");
        assert_eq!(v.serialize(), "count = 8\npoly = 3 + u^2 + 4u^5\n0: 3\n2: 1\n5: 4\n");
        let empty = InvariantValue { modulus: 8, multiset: BTreeMap::new() };
        assert_eq!(empty.polynomial(), "0");
    }
}
