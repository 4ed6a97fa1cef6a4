//! Acceptance suite: one test per release criterion, each printing a
//! PASS line on success (a failure panics with the criterion number).
//!
//! Criterion 10 is gated behind `--ignored` together with the other slow
//! sweeps: `cargo test -p bikei --test acceptance -- --include-ignored`.

use bikei::algebra::{
    alexander_bikei, are_isomorphic, enumerate_bikei, enumerate_bikei_tables, verify_axioms,
    Bikei, BikeiMatrix,
};
use bikei::complex::{boundary_matrix, degenerate_generators, DegeneracyMode};
use bikei::diagram::{apply_move, Diagram, Move, SemiarcId};
use bikei::homology::{
    bikei_cohomology, bikei_homology_with_mode, conjecture_scan, is_cocycle_2, mochizuki_cocycle,
    HomologyError,
};
use bikei::intlinalg::spans_contain;
use bikei::invariant::{cocycle_invariant, counting_invariant, enumerate_colorings};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

const NODES: u64 = 10_000_000;

fn fixture(name: &str) -> String {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("missing fixture {path}: {e}"))
}

fn fixture_diagram(name: &str) -> Diagram {
    Diagram::parse(&fixture(name)).expect("fixture diagrams are well-formed")
}

fn fixture_bikei(name: &str) -> Bikei {
    Bikei::new(BikeiMatrix::parse(&fixture(name)).unwrap().tables).unwrap()
}

#[test]
fn criterion_01_bikei_census() {
    let classes = enumerate_bikei(2, 4).unwrap();
    let keys: Vec<Vec<usize>> = classes.iter().map(|b| b.tables().matrix_key()).collect();
    assert_eq!(
        keys,
        vec![vec![0, 0, 0, 0, 1, 1, 1, 1], vec![1, 1, 1, 1, 0, 0, 0, 0]],
        "criterion 1: FAIL - census of 2-element bikei"
    );
    println!("criterion 1: PASS - exactly two 2-element classes with the expected matrices");
}

#[test]
fn criterion_02_alexander_validity() {
    let b = alexander_bikei(8, 3, 1).expect("criterion 2: FAIL - constructor rejected (8,3,1)");
    assert!(verify_axioms(b.tables()).is_empty(), "criterion 2: FAIL - axioms");

    // the exchange-law derivation, pointwise over all residue triples
    let (s, t, n) = (3i64, 1i64, 8i64);
    let md = |v: i64| v.rem_euclid(n);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                assert_eq!(md(s * s * x), md(x), "criterion 2: FAIL at ({x},{y},{z})");
                assert_eq!(
                    md(s * (t * x + (s - t) * y)),
                    md(t * (s * x) + (s - t) * (s * y)),
                    "criterion 2: FAIL at ({x},{y},{z})"
                );
                assert_eq!(
                    md(t * (t * x + (s - t) * y) + (s - t) * (t * z + (s - t) * y)),
                    md(t * (t * x + (s - t) * z) + (s - t) * (s * y)),
                    "criterion 2: FAIL at ({x},{y},{z})"
                );
                // and the exchange laws on the finite tables themselves
                let (xe, ye, ze) = (x as usize, y as usize, z as usize);
                assert_eq!(
                    b.over(b.over(xe, ye), b.over(ze, ye)),
                    b.over(b.over(xe, ze), b.under(ye, ze))
                );
                assert_eq!(
                    b.over(b.under(xe, ye), b.under(ze, ye)),
                    b.under(b.over(xe, ze), b.over(ye, ze))
                );
                assert_eq!(
                    b.under(b.under(xe, ye), b.under(ze, ye)),
                    b.under(b.under(xe, ze), b.over(ye, ze))
                );
            }
        }
    }
    println!("criterion 2: PASS - (8,3,1) valid, exchange derivation exact over all triples");
}

#[test]
fn criterion_03_subcomplex_closure() {
    for n in 1..=3usize {
        for b in enumerate_bikei(n, 4).unwrap() {
            for degree in 2..=4usize {
                let d_hi = boundary_matrix(&b, degree).unwrap();
                let d_lo = boundary_matrix(&b, degree - 1).unwrap();
                assert!(
                    d_lo.mul(&d_hi).is_zero(),
                    "criterion 3: FAIL - d.d != 0 at size {n}, degree {degree}"
                );
            }
            for degree in 1..=4usize {
                let d = boundary_matrix(&b, degree).unwrap();
                let g = degenerate_generators(&b, degree, DegeneracyMode::Bikei).unwrap();
                let image = d.mul(&g.matrix);
                if degree == 1 {
                    assert_eq!(image.rows(), 0);
                    continue;
                }
                let g_prev =
                    degenerate_generators(&b, degree - 1, DegeneracyMode::Bikei).unwrap();
                assert!(
                    spans_contain(&g_prev.matrix, &image),
                    "criterion 3: FAIL - closure at size {n}, degree {degree}"
                );
            }
        }
    }
    println!("criterion 3: PASS - subcomplex closure and d.d = 0, exact, sizes 1..3, degrees 1..4");
}

#[test]
fn criterion_04_mochizuki_cocycle() {
    let phi = mochizuki_cocycle(8, 3, 1, 4).expect("criterion 4: FAIL - (8,3,1,4) rejected");
    assert!(!phi.is_zero(), "criterion 4: FAIL - cocycle is zero");
    assert!(
        is_cocycle_2(phi.bikei(), phi.values(), 8).unwrap().is_none(),
        "criterion 4: FAIL - cocycle check"
    );
    match mochizuki_cocycle(8, 3, 1, 2) {
        Err(HomologyError::MochizukiConditions(conditions)) => {
            assert!(
                conditions.iter().any(|c| c.starts_with("2a = 0")),
                "criterion 4: FAIL - rejection must name 2a = 0, got {conditions:?}"
            );
        }
        other => panic!("criterion 4: FAIL - (8,3,1,2) must be rejected, got {other:?}"),
    }
    println!("criterion 4: PASS - mochizuki(8,3,1,4) valid and nonzero; a=2 rejected naming 2a=0");
}

#[test]
fn criterion_05_kei_triviality() {
    let mut failures = Vec::new();
    for n in 1..=3usize {
        let keis: Vec<Bikei> = enumerate_bikei_tables(n, 4)
            .unwrap()
            .into_iter()
            .map(|t| Bikei::new(t).unwrap())
            .filter(Bikei::is_kei)
            .collect();
        assert!(!keis.is_empty());
        for (i, k) in keis.iter().enumerate() {
            for p in [2u64, 3, 5, 7] {
                let h = bikei_cohomology(k, 2, p).unwrap();
                if !h.group.is_trivial() {
                    failures.push(format!("kei {n}.{} mod {p}: H^2 = {}", i + 1, h.group));
                }
            }
        }
    }
    assert!(
        failures.is_empty(),
        "criterion 5: FAIL - nontrivial kei H^2 over prime fields:\n  {}",
        failures.join("\n  ")
    );
    println!("criterion 5: PASS - kei H^2 trivial over Z/p for all keis of size <= 3, p <= 7");
}

#[test]
fn criterion_06_virtual_hopf() {
    let d = fixture_diagram("vhopf.txt");
    let x = fixture_bikei("z8_31.txt");
    let phi = mochizuki_cocycle(8, 3, 1, 4).unwrap();
    let count = counting_invariant(&d, &x, NODES).unwrap();
    assert_eq!(count, 16, "criterion 6: FAIL - counting invariant");
    let v = cocycle_invariant(&d, &x, &phi, NODES).unwrap();
    assert_eq!(v.polynomial(), "8 + 8u^4", "criterion 6: FAIL - cocycle invariant");
    println!("criterion 6: PASS - virtual Hopf link: 16 colorings, 8 + 8u^4");
}

#[test]
fn criterion_07_hopf_link_and_enhancement() {
    let hopf = fixture_diagram("hopf.txt");
    let vh = fixture_diagram("vhopf.txt");
    let x = fixture_bikei("z8_31.txt");
    let phi = mochizuki_cocycle(8, 3, 1, 4).unwrap();
    assert_eq!(counting_invariant(&hopf, &x, NODES).unwrap(), 16, "criterion 7: FAIL - count");
    let v = cocycle_invariant(&hopf, &x, &phi, NODES).unwrap();
    assert_eq!(v.polynomial(), "16", "criterion 7: FAIL - enhanced value");

    let switch = fixture_bikei("z2_switch.txt");
    assert_eq!(
        counting_invariant(&vh, &switch, NODES).unwrap(),
        0,
        "criterion 7: FAIL - switch colorings of the virtual Hopf link"
    );
    // Stated target: two switch colorings of the Hopf link. The diagram
    // forces one independent parity choice per component, so the true count
    // is 2 per component = 4; see the repository notes on this criterion.
    assert_eq!(
        counting_invariant(&hopf, &switch, NODES).unwrap(),
        2,
        "criterion 7: FAIL - switch colorings of the Hopf link (each of the two components \
         carries an independent parity choice, so the diagram admits 4, not 2)"
    );
    println!("criterion 7: PASS - Hopf link: 16 colorings, value 16; switch counts 2 vs 0");
}

#[test]
fn criterion_08_surface_example() {
    let d = fixture_diagram("surface_s2_rp2.txt");
    let x = fixture_bikei("z8_31.txt");
    let phi = mochizuki_cocycle(8, 3, 1, 4).unwrap();
    assert_eq!(
        counting_invariant(&d, &x, NODES).unwrap(),
        16,
        "criterion 8: FAIL - surface colorings"
    );
    let v = cocycle_invariant(&d, &x, &phi, NODES).unwrap();
    assert_eq!(v.polynomial(), "8 + 8u^4", "criterion 8: FAIL - surface invariant");
    println!("criterion 8: PASS - marked-vertex surface example: 16 colorings, 8 + 8u^4");
}

fn kink_sites(d: &Diagram) -> Vec<usize> {
    (0..d.crossings.len())
        .filter(|&i| {
            let c = d.crossings[i];
            (c.u_out == c.o_out && c.u_in != c.u_out && c.o_in != c.u_out)
                || (c.u_in == c.o_in && c.u_out != c.u_in && c.o_out != c.u_in)
        })
        .collect()
}

fn bigon_sites(d: &Diagram) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..d.crossings.len() {
        for j in 0..d.crossings.len() {
            if i != j
                && d.crossings[i].u_out == d.crossings[j].u_in
                && d.crossings[i].o_out == d.crossings[j].o_in
            {
                out.push((i, j));
            }
        }
    }
    out
}

fn r3_sites(d: &Diagram) -> Vec<[usize; 3]> {
    let n = d.crossings.len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if apply_move(d, &Move::R3 { crossings: [a, b, c] }).is_ok() {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

#[test]
fn criterion_09_move_invariance() {
    let x = fixture_bikei("z8_31.txt");
    let phi = mochizuki_cocycle(8, 3, 1, 4).unwrap();
    let fixtures = [
        "vhopf.txt",
        "hopf.txt",
        "unknot.txt",
        "trefoil.txt",
        "r3_braid.txt",
        "surface_s2_rp2.txt",
    ];

    // crossing-rotation re-encoding invariance on every fixture
    for name in fixtures {
        let d = fixture_diagram(name);
        let base_cols = enumerate_colorings(&d, &x, NODES).unwrap();
        let base = cocycle_invariant(&d, &x, &phi, NODES).unwrap();
        for i in 0..d.crossings.len() {
            let r = d.rotate_crossing(i);
            assert_eq!(
                enumerate_colorings(&r, &x, NODES).unwrap(),
                base_cols,
                "criterion 9: FAIL - rotation changed the solution set ({name}, crossing {i})"
            );
            assert_eq!(
                cocycle_invariant(&r, &x, &phi, NODES).unwrap(),
                base,
                "criterion 9: FAIL - rotation changed the multiset ({name}, crossing {i})"
            );
        }
    }

    // 200 randomized applicable moves, multiset equality after each
    let mut rng = ChaCha8Rng::seed_from_u64(0xB1C31);
    let mut checked = 0usize;
    let mut d = fixture_diagram(fixtures[0]);
    let mut value = cocycle_invariant(&d, &x, &phi, NODES).unwrap();
    let mut fixture_cursor = 0usize;
    while checked < 200 {
        let semiarcs: Vec<SemiarcId> = d.semiarcs().into_iter().collect();
        let mut candidates: Vec<Move> = Vec::new();
        if d.crossings.len() < 9 {
            candidates.push(Move::R1Insert { semiarc: *semiarcs.choose(&mut rng).unwrap() });
            if semiarcs.len() >= 2 {
                let a = *semiarcs.choose(&mut rng).unwrap();
                let b = *semiarcs.iter().filter(|&&s| s != a).choose(&mut rng).unwrap();
                candidates.push(Move::R2Insert { under: a, over: b });
            }
        }
        if let Some(&site) = kink_sites(&d).choose(&mut rng) {
            candidates.push(Move::R1Remove { crossing: site });
        }
        if let Some(&(i, j)) = bigon_sites(&d).choose(&mut rng) {
            candidates.push(Move::R2Remove { first: i, second: j });
        }
        if let Some(&site) = r3_sites(&d).choose(&mut rng) {
            candidates.push(Move::R3 { crossings: site });
        }
        let Some(mv) = candidates.choose(&mut rng) else {
            fixture_cursor = (fixture_cursor + 1) % fixtures.len();
            d = fixture_diagram(fixtures[fixture_cursor]);
            value = cocycle_invariant(&d, &x, &phi, NODES).unwrap();
            continue;
        };
        let next = apply_move(&d, mv).expect("candidate moves are applicable");
        let next_value = cocycle_invariant(&next, &x, &phi, NODES).unwrap();
        assert_eq!(
            next_value, value,
            "criterion 9: FAIL - multiset changed by {mv:?} on\n{}",
            d.render()
        );
        checked += 1;
        d = next;
        value = next_value;
        // periodically restart from a fresh fixture for variety
        if checked % 25 == 0 {
            fixture_cursor = (fixture_cursor + 1) % fixtures.len();
            d = fixture_diagram(fixtures[fixture_cursor]);
            value = cocycle_invariant(&d, &x, &phi, NODES).unwrap();
        }
    }
    println!("criterion 9: PASS - 200 randomized moves and all rotations preserve the multiset");
}

#[test]
#[ignore = "degree-4 homology comparison, run with --include-ignored"]
fn criterion_10_degree_four_agreement() {
    for b in enumerate_bikei(2, 4).unwrap() {
        let bikei_h4 = bikei_homology_with_mode(&b, 4, DegeneracyMode::Bikei).unwrap();
        let biquandle_h4 = bikei_homology_with_mode(&b, 4, DegeneracyMode::AdjacentOnly).unwrap();
        assert_eq!(
            bikei_h4, biquandle_h4,
            "criterion 10: FAIL - H_4 disagrees for {:?}",
            b.tables().matrix_key()
        );
    }
    println!("criterion 10: PASS - H_4 agrees between the two degenerate subcomplexes");
}

#[test]
fn criterion_11_conjecture_scan() {
    let report = conjecture_scan(3).unwrap();
    let golden = fixture("golden_scan_n3.txt");
    assert_eq!(report, golden, "criterion 11: FAIL - scan drifted from the golden file");
    // the report must carry a free-rank column for every class
    let classes: usize = (1..=3).map(|n| enumerate_bikei(n, 4).unwrap().len()).sum();
    let data_lines = report.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(data_lines, classes);
    println!("criterion 11: PASS - conjecture scan reproduces the archived report");
}

#[test]
fn isomorphism_sanity_for_census_classes() {
    // supporting check used by criteria 1 and 3: census classes really are
    // pairwise non-isomorphic valid bikei
    for n in 1..=3 {
        let classes = enumerate_bikei(n, 4).unwrap();
        for (i, a) in classes.iter().enumerate() {
            assert!(verify_axioms(a.tables()).is_empty());
            for b in classes.iter().skip(i + 1) {
                assert!(are_isomorphic(a, b).unwrap().is_none());
            }
        }
    }
}
