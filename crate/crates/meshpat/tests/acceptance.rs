//! End-to-end acceptance suite. Each test prints one `criterion N: PASS` /
//! `criterion N: FAIL` line (run with `--nocapture` to see them on success).

use std::collections::BTreeSet;
use std::panic::{catch_unwind, resume_unwind, UnwindSafe};
use std::sync::OnceLock;

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use meshpat::classify::{
    build_partition, proven_merges, sequence_grouping, PartitionState, Stage, REFERENCE_ROWS,
};
use meshpat::engine::{count_avoiders, descent_distribution_avoiders, sweep_all_length2, SweepResult};
use meshpat::formulas::{formula_eval, verify_formula, FormulaId};
use meshpat::oeis::{bundled_snapshot, match_sequence};
use meshpat::pattern::naive_count_avoiders;
use meshpat::series::eulerian;
use meshpat::transform::{
    perm_symmetry, shading_candidates, switch_op, switch_perm, symmetry, top_row_shaded,
    toric_shift, up_shift, PartOp, SymmetryWord, D8_WORDS,
};
use meshpat::{GridBox, MeshPattern, Permutation};

fn criterion(n: usize, body: impl FnOnce() + UnwindSafe) {
    match catch_unwind(body) {
        Ok(()) => println!("criterion {n}: PASS"),
        Err(cause) => {
            println!("criterion {n}: FAIL");
            resume_unwind(cause);
        }
    }
}

fn sweep() -> &'static SweepResult {
    static SWEEP: OnceLock<SweepResult> = OnceLock::new();
    SWEEP.get_or_init(|| sweep_all_length2(9).unwrap())
}

/// The 65-component length-2 partition (d8 + shading + shifts).
fn partition65() -> PartitionState {
    static STATE: OnceLock<PartitionState> = OnceLock::new();
    STATE
        .get_or_init(|| {
            build_partition(2, &[Stage::D8, Stage::Shading, Stage::Shifts]).unwrap()
        })
        .clone()
}

fn pat(text: &str) -> MeshPattern {
    text.parse().unwrap()
}

fn random_length2(rng: &mut StdRng) -> MeshPattern {
    let tau = if rng.gen::<bool>() { "12" } else { "21" };
    let mask: u128 = rng.gen_range(0..512u16).into();
    MeshPattern::from_mask(tau.parse().unwrap(), mask).unwrap()
}

#[test]
fn criterion_01_cascade_checkpoints() {
    criterion(1, || {
        let mut state = partition65();
        let counts: Vec<(String, usize)> = state.stage_counts().to_vec();
        let expected = [
            ("initial", 1024),
            ("d8", 168),
            ("shading", 87),
            ("shifts", 65),
            ("fixed_point", 65),
        ];
        assert_eq!(counts.len(), expected.len());
        for ((label, count), (want_label, want_count)) in counts.iter().zip(expected) {
            assert_eq!((label.as_str(), *count), (want_label, want_count));
        }
        assert_eq!(state.component_count(), 65);

        let mut k1 = build_partition(1, &[Stage::D8, Stage::Shading, Stage::Shifts]).unwrap();
        assert_eq!(k1.component_count(), 4);
    });
}

#[test]
fn criterion_02_proven_merges_and_sequence_groups() {
    criterion(2, || {
        let mut state = partition65();
        let groups = sequence_grouping(&mut state, sweep()).unwrap();
        assert_eq!(groups.len(), 46);
        for group in &groups {
            assert_eq!(group.conjectural, group.representatives.len() > 1);
        }
        assert!(groups.iter().any(|g| g.conjectural));

        let mut merged = partition65();
        proven_merges(&mut merged).unwrap();
        assert_eq!(merged.component_count(), 56);
        // applying the merges to the wrong stage is an error
        let mut wrong = build_partition(2, &[Stage::D8]).unwrap();
        assert!(proven_merges(&mut wrong).is_err());
    });
}

#[test]
fn criterion_03_published_sequences() {
    criterion(3, || {
        for row in REFERENCE_ROWS {
            let got = sweep().sequence(&pat(row.representative)).unwrap();
            assert_eq!(got, row.sequence, "subclass {}", row.nr);
        }
    });
}

#[test]
fn criterion_04_subclass_sizes() {
    criterion(4, || {
        let mut state = partition65();
        let components = state.components();
        let total: usize = components.iter().map(|c| c.members.len()).sum();
        assert_eq!(total, 1024);
        assert_eq!(components.len(), 65);

        let mut matched = vec![false; components.len()];
        for row in REFERENCE_ROWS {
            let idx = state.index_of(&pat(row.representative)).unwrap();
            let pos = components
                .iter()
                .position(|c| c.members.binary_search(&idx).is_ok())
                .unwrap();
            assert!(!matched[pos], "two rows map to one component ({})", row.nr);
            matched[pos] = true;
            assert_eq!(components[pos].members.len(), row.size, "subclass {}", row.nr);
        }
        // exactly one component is absent from the published tables (row 37),
        // and by subtraction it has size 1024 - 1016 = 8
        let unmatched: Vec<usize> = matched
            .iter()
            .enumerate()
            .filter(|(_, &m)| !m)
            .map(|(i, _)| i)
            .collect();
        assert_eq!(unmatched.len(), 1);
        assert_eq!(components[unmatched[0]].members.len(), 8);
    });
}

#[test]
fn criterion_05_formulas_vs_engine() {
    criterion(5, || {
        for id in FormulaId::ALL {
            let report = verify_formula(id, 9).unwrap();
            if id == FormulaId::DSUM16 {
                // the printed double sum disagrees with the engine from n = 3
                // on; at the documented n = 4 checkpoint the engine count
                // (8 avoiders) is the ground truth
                assert!(!report.all_match);
                let rows = &report.patterns[0].rows;
                for row in rows {
                    assert_eq!(row.matches, row.n < 3, "n = {}", row.n);
                }
                let n4 = rows.iter().find(|r| r.n == 4).unwrap();
                assert_eq!(n4.engine, BigInt::from(8));
                assert_eq!(n4.formula, BigInt::from(17));
                assert_eq!(formula_eval(FormulaId::DSUM16, 4).unwrap(), BigInt::from(17));
            } else {
                assert!(report.all_match, "{}\n{}", id.name(), report.to_text());
            }
        }
    });
}

#[test]
fn criterion_06_descent_distribution() {
    criterion(6, || {
        for text in ["12:0/0,0/1,1/0,1/1", "12:0/1,1/1,1/2,2/1"] {
            let p = pat(text);
            for n in 2..=8usize {
                let dist = descent_distribution_avoiders(&p, n).unwrap();
                assert_eq!(dist.len(), n);
                // x·E_{n-1}(x): coefficient of x^d is the Eulerian T(n-1, d)
                assert_eq!(dist[0], 0, "{text} n={n}");
                for d in 1..n {
                    let want = eulerian(n - 1, d);
                    assert_eq!(BigInt::from(dist[d]), want, "{text} n={n} d={d}");
                }
            }
        }
    });
}

#[test]
fn criterion_07_transport() {
    criterion(7, || {
        let perms_by_n: Vec<Vec<Permutation>> = (0..=7).map(Permutation::all).collect();

        // d8 symmetries, 100 random patterns, exhaustive n <= 6
        let mut rng = StdRng::seed_from_u64(0x6d657368);
        for _ in 0..100 {
            let p = random_length2(&mut rng);
            for word in D8_WORDS {
                let w: SymmetryWord = word.parse().unwrap();
                let q = symmetry(&p, &w);
                for n in 1..=6 {
                    for pi in &perms_by_n[n] {
                        let sigma = perm_symmetry(pi, &w);
                        assert_eq!(p.avoids(pi), q.avoids(&sigma), "{p} ^{word} {pi:?}");
                    }
                }
            }
        }

        // up-shift and toric-shift on all top-row-shaded length-2 patterns
        let top_row: u128 = [2u32, 5, 8].iter().map(|&b| 1u128 << b).sum();
        let mut shaded = Vec::new();
        for tau in ["12", "21"] {
            for free in 0..64u128 {
                // spread the 6 free bits over the non-top-row cells
                let mut mask = top_row;
                let mut bit = 0;
                for cell in 0..9 {
                    if mask & (1 << cell) != 0 {
                        continue;
                    }
                    if free & (1 << bit) != 0 {
                        mask |= 1 << cell;
                    }
                    bit += 1;
                }
                shaded.push(MeshPattern::from_mask(tau.parse().unwrap(), mask).unwrap());
            }
        }
        assert_eq!(shaded.len(), 128);
        for p in &shaded {
            assert!(top_row_shaded(p));
            let up = up_shift(p);
            let toric = toric_shift(p).unwrap();
            for n in 1..=6 {
                for pi in &perms_by_n[n] {
                    assert_eq!(p.avoids(pi), up.avoids(&pi.up_shift()), "{p} up {pi:?}");
                    assert_eq!(
                        p.avoids(pi),
                        toric.avoids(&pi.toric_shift().unwrap()),
                        "{p} toric {pi:?}"
                    );
                }
            }
        }

        // shading-lemma coincidence, every applicable step, exhaustive n <= 7
        let all: Vec<MeshPattern> = meshpat::classify::all_patterns(2);
        all.par_iter().for_each(|p| {
            for step in shading_candidates(p) {
                let q = p.with_box(step.boxed).unwrap();
                for perms in &perms_by_n[1..] {
                    for pi in perms {
                        assert_eq!(p.avoids(pi), q.avoids(pi), "{p} + {} {pi:?}", step.boxed);
                    }
                }
            }
        });
    });
}

#[test]
fn criterion_08_switch_operations() {
    criterion(8, || {
        // printed example 1: S_{r,r,1}
        let p1 = pat("524613:0/5,1/3,1/4,3/1,3/4,4/3,5/6,6/1,6/3");
        let got1 = switch_op(&p1, PartOp::Rev, PartOp::Rev, true).unwrap();
        assert_eq!(
            got1.to_string(),
            "316425:0/1,0/3,1/6,2/3,3/1,3/4,5/3,5/4,6/5"
        );

        // printed example 2: S_{r,id,1}; the printed output drops box [3,4]
        // (it is not Wilf-equivalent to the input, see the counts below)
        let p2 = pat("316245:0/0,0/6,1/4,1/6,2/3,2/6,3/4,3/6,4/6,5/2,5/3,5/6,6/5,6/6");
        let printed = pat("542631:0/5,0/6,1/2,1/3,1/6,2/6,3/6,4/0,4/6,5/4,5/6,6/3,6/6");
        let got2 = switch_op(&p2, PartOp::Rev, PartOp::Id, true).unwrap();
        assert_eq!(got2.tau(), printed.tau());
        let printed_boxes: BTreeSet<GridBox> = printed.shading().into_iter().collect();
        let got_boxes: BTreeSet<GridBox> = got2.shading().into_iter().collect();
        let mut expected = printed_boxes.clone();
        expected.insert(GridBox { x: 3, y: 4 });
        assert_eq!(got_boxes, expected);
        let at7 = |p: &MeshPattern| count_avoiders(p, 7).unwrap();
        assert_eq!(at7(&p2), BigInt::from(5013));
        assert_eq!(at7(&got2), BigInt::from(5013));
        assert_eq!(at7(&printed), BigInt::from(5012));

        // count preservation on random top-row-shaded length-3 patterns
        let mut rng = StdRng::seed_from_u64(0x73776974);
        let taus = Permutation::all(3);
        let triples = [
            (PartOp::Id, PartOp::Id, false),
            (PartOp::Id, PartOp::Id, true),
            (PartOp::Id, PartOp::Rev, false),
            (PartOp::Id, PartOp::Rev, true),
            (PartOp::Rev, PartOp::Id, false),
            (PartOp::Rev, PartOp::Id, true),
            (PartOp::Rev, PartOp::Rev, false),
            (PartOp::Rev, PartOp::Rev, true),
        ];
        for _ in 0..20 {
            let tau = taus[rng.gen_range(0..taus.len())].clone();
            let top_row: u128 = (0..4).map(|x| 1u128 << (x * 4 + 3)).sum();
            let mut mask = top_row;
            for cell in 0..16 {
                if mask & (1 << cell) == 0 && rng.gen::<bool>() {
                    mask |= 1 << cell;
                }
            }
            let p = MeshPattern::from_mask(tau, mask).unwrap();
            assert!(top_row_shaded(&p));
            for (a, b, d) in triples {
                let q = switch_op(&p, a, b, d).unwrap();
                for n in 1..=6 {
                    assert_eq!(
                        naive_count_avoiders(&p, n).unwrap(),
                        naive_count_avoiders(&q, n).unwrap(),
                        "{p} S_{{{a:?},{b:?},{}}} n={n}",
                        u8::from(d)
                    );
                }
                // the observation is a per-permutation statement; spot-check
                // it through the permutation-level switch as well
                for pi in Permutation::all(5) {
                    let tpi = switch_perm(&pi, a, b, d).unwrap();
                    assert_eq!(p.avoids(&pi), q.avoids(&tpi));
                }
            }
        }
    });
}

#[test]
fn criterion_09_oeis_attribution() {
    criterion(9, || {
        let db = bundled_snapshot();
        let cited = [
            ("12:", "A000012"),
            ("12:0/0,0/1,0/2", "A000142"),
            ("12:0/0,0/1,0/2,2/0,2/1,2/2", "A001710"),
            ("12:0/0,0/1,0/2,1/0,1/1,1/2,2/0,2/1,2/2", "A000142"),
            ("12:0/0,0/1,0/2,1/0,2/0", "A094258"),
            ("12:0/0,0/1,0/2,1/0,1/2,2/0,2/1,2/2", "A213167"),
            ("12:0/1,1/0,1/1,1/2,2/1", "A000255"),
            ("12:0/1,0/2,1/0,2/0", "A141154"),
            ("12:0/0,0/1,0/2,1/2,2/0,2/2", "A121586"),
            ("12:0/0,0/2,1/0,1/1,1/2", "A058797"),
            ("12:0/1,1/0", "A101900"),
        ];
        let mut seen = BTreeSet::new();
        for (rep, id) in cited {
            let seq = sweep().sequence(&pat(rep)).unwrap();
            let hits = match_sequence(&seq, &db, 3);
            let ids: Vec<&str> = hits.iter().map(|m| m.id.as_str()).collect();
            assert_eq!(ids, vec![id], "{rep}");
            seen.insert(id);
        }
        assert_eq!(seen.len(), 10, "all ten cited identifiers covered");
    });
}

#[test]
fn criterion_10_engine_equals_oracle() {
    criterion(10, || {
        let all = meshpat::classify::all_patterns(2);
        all.par_iter().for_each(|p| {
            for n in 1..=5 {
                assert_eq!(
                    sweep().count(p, n).unwrap(),
                    naive_count_avoiders(p, n).unwrap(),
                    "{p} n={n}"
                );
            }
        });
        let mut rng = StdRng::seed_from_u64(0x656e67);
        let sample: Vec<MeshPattern> = (0..100).map(|_| random_length2(&mut rng)).collect();
        sample.par_iter().for_each(|p| {
            for n in [6, 7] {
                assert_eq!(
                    sweep().count(p, n).unwrap(),
                    naive_count_avoiders(p, n).unwrap(),
                    "{p} n={n}"
                );
            }
        });
    });
}
