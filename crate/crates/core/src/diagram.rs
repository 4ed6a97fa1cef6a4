//! Semiarc-graph model of unoriented link diagrams and marked-vertex
//! (knotted surface) diagrams, a line-based text format, and Reidemeister
//! rewrites for property testing.
//!
//! A diagram is abstract: no planar embedding is stored, so virtual
//! crossings are implicit (semiarcs simply do not end there). Every semiarc
//! id occurs exactly twice across all record slots; a free loop `O a`
//! counts as both occurrences of `a`.

use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

pub type SemiarcId = u32;

/// Classical crossing. The record carries the relations
///   color(u_out) = color(u_in) underop color(o_in)
///   color(o_out) = color(o_in) overop  color(u_in)
/// and the Boltzmann pair is (u_in, o_in).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Crossing {
    pub u_in: SemiarcId,
    pub o_in: SemiarcId,
    pub u_out: SemiarcId,
    pub o_out: SemiarcId,
}

/// Saddle vertex; all four semiarcs take the same color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Saddle {
    pub ends: [SemiarcId; 4],
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Diagram {
    pub crossings: Vec<Crossing>,
    pub saddles: Vec<Saddle>,
    pub loops: Vec<SemiarcId>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("line {line}: unknown record tag '{tag}'")]
    UnknownTag { line: usize, tag: String },
    #[error("line {line}: cannot parse '{token}' as a semiarc id")]
    BadToken { line: usize, token: String },
    #[error("line {line}: record needs {expected} semiarc ids, found {found}")]
    WrongArity { line: usize, expected: usize, found: usize },
    #[error("line {line}: semiarc ids must be positive")]
    NonPositiveId { line: usize },
    #[error("semiarc {id} occurs {count} times (first seen on line {line}); every id must occur exactly twice")]
    OccurrenceCount { id: SemiarcId, count: usize, line: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MoveError {
    #[error("site does not match the required local pattern: {0}")]
    BadSite(String),
}

impl Diagram {
    pub fn new(
        crossings: Vec<Crossing>,
        saddles: Vec<Saddle>,
        loops: Vec<SemiarcId>,
    ) -> Result<Self, DiagramError> {
        let d = Diagram { crossings, saddles, loops };
        d.validate()?;
        Ok(d)
    }

    pub fn semiarcs(&self) -> BTreeSet<SemiarcId> {
        let mut s = BTreeSet::new();
        for c in &self.crossings {
            s.extend([c.u_in, c.o_in, c.u_out, c.o_out]);
        }
        for sd in &self.saddles {
            s.extend(sd.ends);
        }
        s.extend(self.loops.iter().copied());
        s
    }

    fn max_id(&self) -> SemiarcId {
        self.semiarcs().into_iter().next_back().unwrap_or(0)
    }

    /// Occurrence slots of each id, in record storage order.
    fn occurrences(&self) -> BTreeMap<SemiarcId, usize> {
        let mut occ: BTreeMap<SemiarcId, usize> = BTreeMap::new();
        let mut bump = |id: SemiarcId, by: usize| *occ.entry(id).or_insert(0) += by;
        for c in &self.crossings {
            for id in [c.u_in, c.o_in, c.u_out, c.o_out] {
                bump(id, 1);
            }
        }
        for s in &self.saddles {
            for id in s.ends {
                bump(id, 1);
            }
        }
        for &l in &self.loops {
            bump(l, 2);
        }
        occ
    }

    fn validate(&self) -> Result<(), DiagramError> {
        for (id, count) in self.occurrences() {
            if count != 2 {
                return Err(DiagramError::OccurrenceCount { id, count, line: 0 });
            }
        }
        Ok(())
    }

    /// One record per line, sorted by first id (ties by tag, then content).
    pub fn render(&self) -> String {
        let mut lines: Vec<(SemiarcId, u8, String)> = Vec::new();
        for c in &self.crossings {
            lines.push((c.u_in, 0, format!("X {} {} {} {}", c.u_in, c.o_in, c.u_out, c.o_out)));
        }
        for s in &self.saddles {
            let [a, b, cc, d] = s.ends;
            lines.push((a, 1, format!("S {a} {b} {cc} {d}")));
        }
        for &l in &self.loops {
            lines.push((l, 2, format!("O {l}")));
        }
        lines.sort();
        let mut out = String::new();
        for (_, _, l) in lines {
            out.push_str(&l);
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, DiagramError> {
        let mut crossings = Vec::new();
        let mut saddles = Vec::new();
        let mut loops = Vec::new();
        let mut first_line: BTreeMap<SemiarcId, usize> = BTreeMap::new();
        for (lno, raw) in text.lines().enumerate() {
            let line = lno + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut tokens = content.split_whitespace();
            let tag = tokens.next().unwrap();
            let ids: Result<Vec<i64>, DiagramError> = tokens
                .map(|t| {
                    t.parse::<i64>()
                        .map_err(|_| DiagramError::BadToken { line, token: t.to_string() })
                })
                .collect();
            let ids = ids?;
            if ids.iter().any(|&v| v <= 0) {
                return Err(DiagramError::NonPositiveId { line });
            }
            let ids: Vec<SemiarcId> = ids.into_iter().map(|v| v as SemiarcId).collect();
            for &id in &ids {
                first_line.entry(id).or_insert(line);
            }
            match tag {
                "X" => {
                    if ids.len() != 4 {
                        return Err(DiagramError::WrongArity { line, expected: 4, found: ids.len() });
                    }
                    crossings.push(Crossing {
                        u_in: ids[0],
                        o_in: ids[1],
                        u_out: ids[2],
                        o_out: ids[3],
                    });
                }
                "S" => {
                    if ids.len() != 4 {
                        return Err(DiagramError::WrongArity { line, expected: 4, found: ids.len() });
                    }
                    saddles.push(Saddle { ends: [ids[0], ids[1], ids[2], ids[3]] });
                }
                "O" => {
                    if ids.len() != 1 {
                        return Err(DiagramError::WrongArity { line, expected: 1, found: ids.len() });
                    }
                    loops.push(ids[0]);
                }
                other => {
                    return Err(DiagramError::UnknownTag { line, tag: other.to_string() });
                }
            }
        }
        let d = Diagram { crossings, saddles, loops };
        for (id, count) in d.occurrences() {
            if count != 2 {
                return Err(DiagramError::OccurrenceCount {
                    id,
                    count,
                    line: first_line.get(&id).copied().unwrap_or(0),
                });
            }
        }
        Ok(d)
    }

    /// Replaces a crossing record by its 180-degree rotation: inputs and
    /// outputs swap. The constraint set and Boltzmann weight are unchanged
    /// for any valid bikei and cocycle.
    pub fn rotate_crossing(&self, index: usize) -> Diagram {
        let mut d = self.clone();
        let c = d.crossings[index];
        d.crossings[index] =
            Crossing { u_in: c.u_out, o_in: c.o_out, u_out: c.u_in, o_out: c.o_in };
        d
    }

    /// Renaming isomorphism test: some bijection of semiarc ids carries the
    /// crossing, saddle and loop records of `self` onto those of `other`.
    pub fn is_isomorphic(&self, other: &Diagram) -> bool {
        if self.crossings.len() != other.crossings.len()
            || self.saddles.len() != other.saddles.len()
            || self.loops.len() != other.loops.len()
        {
            return false;
        }
        let mut map: BTreeMap<SemiarcId, SemiarcId> = BTreeMap::new();
        let mut used: BTreeSet<SemiarcId> = BTreeSet::new();
        // loops are isolated circles; only their count matters
        fn bind(
            map: &mut BTreeMap<SemiarcId, SemiarcId>,
            used: &mut BTreeSet<SemiarcId>,
            from: &[SemiarcId],
            to: &[SemiarcId],
        ) -> Option<Vec<SemiarcId>> {
            let mut newly = Vec::new();
            for (&f, &t) in from.iter().zip(to) {
                match map.get(&f) {
                    Some(&existing) if existing == t => {}
                    Some(_) => {
                        for n in newly.iter().rev() {
                            let t = map.remove(n).unwrap();
                            used.remove(&t);
                        }
                        return None;
                    }
                    None => {
                        if used.contains(&t) {
                            for n in newly.iter().rev() {
                                let t = map.remove(n).unwrap();
                                used.remove(&t);
                            }
                            return None;
                        }
                        map.insert(f, t);
                        used.insert(t);
                        newly.push(f);
                    }
                }
            }
            Some(newly)
        }
        fn unbind(
            map: &mut BTreeMap<SemiarcId, SemiarcId>,
            used: &mut BTreeSet<SemiarcId>,
            newly: &[SemiarcId],
        ) {
            for n in newly.iter().rev() {
                let t = map.remove(n).unwrap();
                used.remove(&t);
            }
        }
        fn search(
            d1: &Diagram,
            d2: &Diagram,
            idx: usize,
            taken: &mut Vec<bool>,
            map: &mut BTreeMap<SemiarcId, SemiarcId>,
            used: &mut BTreeSet<SemiarcId>,
        ) -> bool {
            let records = d1.crossings.len() + d1.saddles.len();
            if idx == records {
                return true;
            }
            let from: Vec<SemiarcId> = if idx < d1.crossings.len() {
                let c = d1.crossings[idx];
                vec![c.u_in, c.o_in, c.u_out, c.o_out]
            } else {
                d1.saddles[idx - d1.crossings.len()].ends.to_vec()
            };
            let candidates: Vec<(usize, Vec<SemiarcId>)> = if idx < d1.crossings.len() {
                d2.crossings
                    .iter()
                    .enumerate()
                    .map(|(i, c)| (i, vec![c.u_in, c.o_in, c.u_out, c.o_out]))
                    .collect()
            } else {
                d2.saddles
                    .iter()
                    .enumerate()
                    .map(|(i, s)| (i + d2.crossings.len(), s.ends.to_vec()))
                    .collect()
            };
            for (slot, to) in candidates {
                if taken[slot] {
                    continue;
                }
                if let Some(newly) = bind(map, used, &from, &to) {
                    taken[slot] = true;
                    if search(d1, d2, idx + 1, taken, map, used) {
                        return true;
                    }
                    taken[slot] = false;
                    unbind(map, used, &newly);
                }
            }
            false
        }
        let mut taken = vec![false; other.crossings.len() + other.saddles.len()];
        search(self, other, 0, &mut taken, &mut map, &mut used)
    }
}

/// Reidemeister rewrites. Insertions pick deterministic fresh ids; removals
/// demand the exact local pattern the paired insertion produces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    R1Insert { semiarc: SemiarcId },
    R1Remove { crossing: usize },
    R2Insert { under: SemiarcId, over: SemiarcId },
    R2Remove { first: usize, second: usize },
    R3 { crossings: [usize; 3] },
}

/// Slot positions of one id occurrence, used when splitting a semiarc.
#[derive(Debug, Clone, Copy)]
enum Slot {
    CrossingUIn(usize),
    CrossingOIn(usize),
    CrossingUOut(usize),
    CrossingOOut(usize),
    SaddleEnd(usize, usize),
    Loop(usize),
}

fn slots_of(d: &Diagram, id: SemiarcId) -> Vec<Slot> {
    let mut out = Vec::new();
    for (i, c) in d.crossings.iter().enumerate() {
        if c.u_in == id {
            out.push(Slot::CrossingUIn(i));
        }
        if c.o_in == id {
            out.push(Slot::CrossingOIn(i));
        }
        if c.u_out == id {
            out.push(Slot::CrossingUOut(i));
        }
        if c.o_out == id {
            out.push(Slot::CrossingOOut(i));
        }
    }
    for (i, s) in d.saddles.iter().enumerate() {
        for (j, &e) in s.ends.iter().enumerate() {
            if e == id {
                out.push(Slot::SaddleEnd(i, j));
            }
        }
    }
    for (i, &l) in d.loops.iter().enumerate() {
        if l == id {
            out.push(Slot::Loop(i));
        }
    }
    out
}

fn set_slot(d: &mut Diagram, slot: Slot, id: SemiarcId) {
    match slot {
        Slot::CrossingUIn(i) => d.crossings[i].u_in = id,
        Slot::CrossingOIn(i) => d.crossings[i].o_in = id,
        Slot::CrossingUOut(i) => d.crossings[i].u_out = id,
        Slot::CrossingOOut(i) => d.crossings[i].o_out = id,
        Slot::SaddleEnd(i, j) => d.saddles[i].ends[j] = id,
        Slot::Loop(i) => d.loops[i] = id,
    }
}

/// Splits semiarc `id` for an insertion: the first occurrence keeps `id`,
/// the second becomes `fresh`. A free loop instead reports both ends as the
/// same id, with the loop record dropped.
fn split_semiarc(
    d: &mut Diagram,
    id: SemiarcId,
    fresh: SemiarcId,
) -> Result<(SemiarcId, SemiarcId), MoveError> {
    let slots = slots_of(d, id);
    if slots.is_empty() {
        return Err(MoveError::BadSite(format!("semiarc {id} not in diagram")));
    }
    if let Some(&Slot::Loop(i)) = slots.iter().find(|s| matches!(s, Slot::Loop(_))) {
        d.loops.remove(i);
        return Ok((id, id));
    }
    assert_eq!(slots.len(), 2, "validated diagrams have two occurrences");
    set_slot(d, slots[1], fresh);
    Ok((id, fresh))
}

/// Substitutes ids by class representatives and turns slot-less classes
/// into free loops.
fn merge_ids(d: &mut Diagram, pairs: &[(SemiarcId, SemiarcId)]) {
    let mut rep: BTreeMap<SemiarcId, SemiarcId> = BTreeMap::new();
    fn find(rep: &mut BTreeMap<SemiarcId, SemiarcId>, x: SemiarcId) -> SemiarcId {
        let p = *rep.get(&x).unwrap_or(&x);
        if p == x {
            x
        } else {
            let r = find(rep, p);
            rep.insert(x, r);
            r
        }
    }
    for &(a, b) in pairs {
        let (ra, rb) = (find(&mut rep, a), find(&mut rep, b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            rep.insert(hi, lo);
        }
    }
    let ids: Vec<SemiarcId> = d.semiarcs().into_iter().collect();
    for id in ids {
        let r = find(&mut rep, id);
        if r != id {
            for slot in slots_of(d, id) {
                set_slot(d, slot, r);
            }
        }
    }
    // classes that lost every slot close up into free loops
    let occ = d.occurrences();
    let mut seen: BTreeSet<SemiarcId> = BTreeSet::new();
    for &(a, b) in pairs {
        for x in [a, b] {
            let r = find(&mut rep, x);
            if seen.insert(r) && !occ.contains_key(&r) {
                d.loops.push(r);
            }
        }
    }
}

pub fn apply_move(d: &Diagram, mv: &Move) -> Result<Diagram, MoveError> {
    let mut out = d.clone();
    match *mv {
        Move::R1Insert { semiarc } => {
            let loop_arc = d.max_id() + 1;
            let fresh = d.max_id() + 2;
            let (a, b) = split_semiarc(&mut out, semiarc, fresh)?;
            // kink record (a, b, l, l): its relations force color(a) =
            // color(b), with the loop color determined
            out.crossings.push(Crossing { u_in: a, o_in: b, u_out: loop_arc, o_out: loop_arc });
        }
        Move::R1Remove { crossing } => {
            let Some(&c) = d.crossings.get(crossing) else {
                return Err(MoveError::BadSite(format!("no crossing {crossing}")));
            };
            out.crossings.remove(crossing);
            if c.u_out == c.o_out && c.u_in != c.u_out && c.o_in != c.u_out {
                merge_ids(&mut out, &[(c.u_in, c.o_in)]);
            } else if c.u_in == c.o_in && c.u_out != c.u_in && c.o_out != c.u_in {
                merge_ids(&mut out, &[(c.u_out, c.o_out)]);
            } else {
                return Err(MoveError::BadSite(format!(
                    "crossing {crossing} is not a kink of the removable form"
                )));
            }
        }
        Move::R2Insert { under, over } => {
            if under == over {
                return Err(MoveError::BadSite(
                    "R2 insertion needs two distinct semiarcs".into(),
                ));
            }
            let base = d.max_id();
            let (u_a, u_b) = split_semiarc(&mut out, under, base + 1)?;
            let (o_a, o_b) = split_semiarc(&mut out, over, base + 2)?;
            let mid_u = base + 3;
            let mid_o = base + 4;
            // flow-through bigon: outputs of the first crossing feed the
            // second, whose outputs rejoin the original strands
            out.crossings.push(Crossing { u_in: u_a, o_in: o_a, u_out: mid_u, o_out: mid_o });
            out.crossings.push(Crossing { u_in: mid_u, o_in: mid_o, u_out: u_b, o_out: o_b });
        }
        Move::R2Remove { first, second } => {
            let (Some(&c1), Some(&c2)) = (d.crossings.get(first), d.crossings.get(second))
            else {
                return Err(MoveError::BadSite("crossing index out of range".into()));
            };
            let (c1, c2) = if c1.u_out == c2.u_in && c1.o_out == c2.o_in {
                (c1, c2)
            } else if c2.u_out == c1.u_in && c2.o_out == c1.o_in {
                (c2, c1)
            } else {
                return Err(MoveError::BadSite(
                    "crossings do not form a flow-through bigon".into(),
                ));
            };
            let mut keep = Vec::new();
            for (i, &c) in d.crossings.iter().enumerate() {
                if i != first && i != second {
                    keep.push(c);
                }
            }
            out.crossings = keep;
            merge_ids(&mut out, &[(c1.u_in, c2.u_out), (c1.o_in, c2.o_out)]);
        }
        Move::R3 { crossings } => {
            out = apply_r3(d, crossings)?;
        }
    }
    debug_assert!(out.validate().is_ok(), "moves must preserve well-formedness");
    Ok(out)
}

/// Third Reidemeister move. The "left" pattern has the middle-strand
/// semiarc entering two crossings; the rewrite slides it to the "right"
/// pattern where it leaves two crossings, and vice versa.
fn apply_r3(d: &Diagram, idx: [usize; 3]) -> Result<Diagram, MoveError> {
    for i in idx {
        if i >= d.crossings.len() {
            return Err(MoveError::BadSite(format!("no crossing {i}")));
        }
    }
    if idx[0] == idx[1] || idx[0] == idx[2] || idx[1] == idx[2] {
        return Err(MoveError::BadSite("R3 needs three distinct crossings".into()));
    }
    let orderings = [
        [idx[0], idx[1], idx[2]],
        [idx[0], idx[2], idx[1]],
        [idx[1], idx[0], idx[2]],
        [idx[1], idx[2], idx[0]],
        [idx[2], idx[0], idx[1]],
        [idx[2], idx[1], idx[0]],
    ];
    for ord in orderings {
        let (c1, c2, c3) = (d.crossings[ord[0]], d.crossings[ord[1]], d.crossings[ord[2]]);
        // left pattern: y-mid is u/o input of c1 and c2; x flows c1 -> c3
        // under; z flows c2 -> c3 over
        if c1.o_in == c2.u_in && c1.u_out == c3.u_in && c2.o_out == c3.o_in {
            let mids = [c1.o_in, c1.u_out, c2.o_out];
            if mids[0] != mids[1] && mids[0] != mids[2] && mids[1] != mids[2] {
                let mut out = remove_crossings(d, &ord);
                let base = d.max_id();
                let (xm, zm, ym) = (base + 1, base + 2, base + 3);
                let (x_a, y_l) = (c1.u_in, c1.o_out);
                let (z_a, y_r) = (c2.o_in, c2.u_out);
                let (x_b, z_b) = (c3.u_out, c3.o_out);
                out.crossings.push(Crossing { u_in: x_a, o_in: z_a, u_out: xm, o_out: zm });
                out.crossings.push(Crossing { u_in: y_l, o_in: zm, u_out: ym, o_out: z_b });
                out.crossings.push(Crossing { u_in: xm, o_in: y_r, u_out: x_b, o_out: ym });
                debug_assert!(out.validate().is_ok());
                return Ok(out);
            }
        }
        // right pattern: the mirror wiring produced by the rewrite above
        if c1.u_out == c3.u_in && c1.o_out == c2.o_in && c2.u_out == c3.o_out {
            let mids = [c1.u_out, c1.o_out, c2.u_out];
            if mids[0] != mids[1] && mids[0] != mids[2] && mids[1] != mids[2] {
                let mut out = remove_crossings(d, &ord);
                let base = d.max_id();
                let (xm, ym, zm) = (base + 1, base + 2, base + 3);
                let (x_a, z_a) = (c1.u_in, c1.o_in);
                let (y_l, z_b) = (c2.u_in, c2.o_out);
                let (y_r, x_b) = (c3.o_in, c3.u_out);
                out.crossings.push(Crossing { u_in: x_a, o_in: ym, u_out: xm, o_out: y_l });
                out.crossings.push(Crossing { u_in: ym, o_in: z_a, u_out: y_r, o_out: zm });
                out.crossings.push(Crossing { u_in: xm, o_in: zm, u_out: x_b, o_out: z_b });
                debug_assert!(out.validate().is_ok());
                return Ok(out);
            }
        }
    }
    Err(MoveError::BadSite("no R3 pattern among the three crossings".into()))
}

fn remove_crossings(d: &Diagram, drop: &[usize; 3]) -> Diagram {
    let mut out = d.clone();
    out.crossings = d
        .crossings
        .iter()
        .enumerate()
        .filter(|(i, _)| !drop.contains(i))
        .map(|(_, &c)| c)
        .collect();
    out
}
