use mlpg_core::corpus::{gen_synthetic, SyntheticSpec};
use mlpg_core::evaluation::{aggregate, hamming_loss, GroupField};
use mlpg_core::{reduce, ClassifierKind, EvalRecord, Labelset, ReducerSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GRID: [u32; 5] = [10, 30, 50, 70, 90];

#[test]
fn mean_size_grows_with_m_and_per_labelset_merging_keeps_more() {
    let corpora: Vec<_> = (0..20u64)
        .map(|s| gen_synthetic(&SyntheticSpec::new(200 + 10 * s as usize, 3, 5, 7, 2.0, s)).unwrap())
        .collect();
    let makers: [(&str, fn(u32) -> ReducerSpec); 3] = [
        ("mchen", |m| ReducerSpec::mchen(m).unwrap()),
        ("mrsp1", |m| ReducerSpec::mrsp1(m).unwrap()),
        ("mrsp2", |m| ReducerSpec::mrsp2(m).unwrap()),
    ];
    for (name, make) in makers {
        let means: Vec<f64> = GRID
            .iter()
            .map(|&m| {
                corpora.iter().map(|ds| reduce(&make(m), ds).unwrap().size_pct).sum::<f64>()
                    / corpora.len() as f64
            })
            .collect();
        assert!(means.windows(2).all(|w| w[0] <= w[1]), "{name}: {means:?}");
        if name == "mchen" {
            for (m, mean) in GRID.iter().zip(&means) {
                assert!((f64::from(*m) - 1.0..=f64::from(*m) + 0.5).contains(mean), "MChen_{m}: {mean}");
            }
        }
    }
    for ds in &corpora {
        for m in GRID {
            let chen = reduce(&ReducerSpec::mchen(m).unwrap(), ds).unwrap().reduced.len();
            let rsp1 = reduce(&ReducerSpec::mrsp1(m).unwrap(), ds).unwrap().reduced.len();
            assert!(rsp1 >= chen);
        }
    }
}

#[test]
fn exhaustive_mchen_returns_the_training_set() {
    let ds = gen_synthetic(&SyntheticSpec::new(60, 2, 4, 5, 1.0, 3)).unwrap();
    let r = reduce(&ReducerSpec::mchen(100).unwrap(), &ds).unwrap().reduced;
    let mut a: Vec<(Vec<u64>, Labelset)> = (0..ds.len())
        .map(|i| (ds.row(i).iter().map(|v| v.to_bits()).collect(), ds.labelset(i).clone()))
        .collect();
    let mut b: Vec<(Vec<u64>, Labelset)> = (0..r.len())
        .map(|i| (r.row(i).iter().map(|v| v.to_bits()).collect(), r.labelset(i).clone()))
        .collect();
    a.sort();
    b.sort();
    assert_eq!(a, b);
}

#[test]
fn hamming_loss_extremes() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..200 {
        let l = rng.random_range(1..10);
        let ys: Vec<Labelset> = (0..rng.random_range(1..20))
            .map(|_| Labelset::new((0..l).filter(|_| rng.random_bool(0.5))))
            .collect();
        let complement: Vec<Labelset> = ys
            .iter()
            .map(|y| Labelset::new((0..l).filter(|x| !y.contains(*x))))
            .collect();
        assert_eq!(hamming_loss(&ys, &ys, l).unwrap(), 0.0);
        assert_eq!(hamming_loss(&ys, &complement, l).unwrap(), 1.0);
    }
}

#[test]
fn aggregate_matches_manual_means() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let records: Vec<EvalRecord> = (0..240)
        .map(|i| EvalRecord {
            method: format!("m{}", i % 4),
            corpus: format!("c{}", i % 5),
            theta: [0.0, 0.4][(i / 4) % 2],
            classifier: ClassifierKind::ALL[i % 3],
            k: 1,
            hl: rng.random(),
            size_pct: rng.random_range(1.0..100.0),
        })
        .collect();
    let groups = aggregate(&records, &[GroupField::Method, GroupField::Theta]);
    assert_eq!(groups.len(), 8);
    for g in &groups {
        let members: Vec<&EvalRecord> = records
            .iter()
            .filter(|r| Some(&r.method) == g.key.method.as_ref() && Some(r.theta) == g.key.theta())
            .collect();
        let hl = members.iter().map(|r| r.hl).sum::<f64>() / members.len() as f64;
        let size = members.iter().map(|r| r.size_pct).sum::<f64>() / members.len() as f64;
        assert_eq!(g.count, members.len());
        assert!((g.hl - hl).abs() < 1e-12 && (g.size_pct - size).abs() < 1e-12);
    }
}
