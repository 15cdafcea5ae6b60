//! Classifiers checked against brute-force recomputation from fully sorted neighbour lists.

use mlpg_core::classifiers::{mlknn_fit, predict_br, predict_lp};
use mlpg_core::{Labelset, MultilabelDataset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_corpus(rng: &mut ChaCha8Rng, n: usize, labels: usize) -> MultilabelDataset {
    let rows = (0..n)
        .map(|_| vec![f64::from(rng.random_range(0..5)), f64::from(rng.random_range(0..5))])
        .collect();
    let ys = (0..n)
        .map(|_| Labelset::new((0..labels).filter(|_| rng.random_bool(0.4))))
        .collect();
    MultilabelDataset::from_rows(rows, ys, labels).unwrap()
}

fn sorted_neighbours(ds: &MultilabelDataset, q: &[f64], skip: Option<usize>) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..ds.len()).filter(|&i| Some(i) != skip).collect();
    let d = |i: usize| {
        ds.row(i).iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    };
    idx.sort_by(|&a, &b| d(a).partial_cmp(&d(b)).unwrap().then(a.cmp(&b)));
    idx
}

#[test]
fn br_and_lp_match_vote_counting() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let n = rng.random_range(1..25);
        let ds = random_corpus(&mut rng, n, 4);
        let q = [f64::from(rng.random_range(0..5)), f64::from(rng.random_range(0..5))];
        let k = rng.random_range(1..=n);
        let nn: Vec<usize> = sorted_neighbours(&ds, &q, None).into_iter().take(k).collect();

        let br: Labelset = (0..4)
            .filter(|&l| 2 * nn.iter().filter(|&&i| ds.labelset(i).contains(l)).count() > k)
            .collect();
        assert_eq!(predict_br(&q, &ds, k).unwrap(), br);

        let count = |y: &Labelset| nn.iter().filter(|&&i| ds.labelset(i) == y).count();
        let top = nn.iter().map(|&i| count(ds.labelset(i))).max().unwrap();
        let lp = nn.iter().map(|&i| ds.labelset(i)).find(|y| count(y) == top).unwrap();
        assert_eq!(&predict_lp(&q, &ds, k).unwrap(), lp);
    }
}

/// ML-kNN on 8 instances: leave-one-out membership counts, smoothed estimates and
/// MAP decisions recomputed by enumeration.
#[test]
fn mlknn_matches_leave_one_out_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (n, labels, s) = (8usize, 3usize, 1.0);
    for _ in 0..1000 {
        let ds = random_corpus(&mut rng, n, labels);
        let k = rng.random_range(1..n);
        let model = mlknn_fit(&ds, k, s).unwrap();

        for l in 0..labels {
            let with_l: Vec<usize> = (0..n).filter(|&i| ds.labelset(i).contains(l)).collect();
            let prior = (s + with_l.len() as f64) / (2.0 * s + n as f64);
            assert!((model.priors()[l] - prior).abs() < 1e-12);

            let c_of = |i: usize| {
                sorted_neighbours(&ds, ds.row(i), Some(i))
                    .into_iter()
                    .take(k)
                    .filter(|&j| ds.labelset(j).contains(l))
                    .count()
            };
            let mut kw = vec![0.0; k + 1];
            let mut kwo = vec![0.0; k + 1];
            for i in 0..n {
                if with_l.contains(&i) {
                    kw[c_of(i)] += 1.0;
                } else {
                    kwo[c_of(i)] += 1.0;
                }
            }
            let tw: f64 = kw.iter().sum();
            let two: f64 = kwo.iter().sum();
            for c in 0..=k {
                let pw = (s + kw[c]) / (s * (k as f64 + 1.0) + tw);
                let pwo = (s + kwo[c]) / (s * (k as f64 + 1.0) + two);
                assert!((model.posterior_with(l)[c] - pw).abs() < 1e-12);
                assert!((model.posterior_without(l)[c] - pwo).abs() < 1e-12);
            }
        }

        let q = [f64::from(rng.random_range(0..5)), f64::from(rng.random_range(0..5))];
        let nn: Vec<usize> = sorted_neighbours(&ds, &q, None).into_iter().take(k).collect();
        let expected: Labelset = (0..labels)
            .filter(|&l| {
                let c = nn.iter().filter(|&&i| ds.labelset(i).contains(l)).count();
                let p = model.priors()[l];
                p * model.posterior_with(l)[c] > (1.0 - p) * model.posterior_without(l)[c]
            })
            .collect();
        assert_eq!(model.predict(&q).unwrap(), expected);
    }
}
