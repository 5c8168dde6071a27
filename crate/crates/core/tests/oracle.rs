mod common;

use missing_kmeans::calculus::{centroid, cost};
use missing_kmeans::oracle::{exact_k_means, exact_k_means_with, lloyd_baseline, ExactOptions};
use missing_kmeans::{Dataset, Execution, MissingPoint};
use rand::Rng;

use common::{close, gritty_instance, random_instance, rng};

/// Plain k-means optimum for complete points: every labelling, each cluster
/// scored about its mean.
fn classical_optimum(points: &[Vec<f64>], k: usize) -> f64 {
    let n = points.len();
    let d = points[0].len();
    let mut best = f64::INFINITY;
    for code in 0..k.pow(n as u32) {
        let labels: Vec<usize> = (0..n).map(|x| code / k.pow(x as u32) % k).collect();
        let mut total = 0.0;
        for t in 0..k {
            let members: Vec<&Vec<f64>> = (0..n).filter(|&x| labels[x] == t).map(|x| &points[x]).collect();
            if members.is_empty() {
                continue;
            }
            for i in 0..d {
                let mean = members.iter().map(|p| p[i]).sum::<f64>() / members.len() as f64;
                total += members.iter().map(|p| (p[i] - mean).powi(2)).sum::<f64>();
            }
        }
        best = best.min(total);
    }
    best
}

#[test]
fn complete_points_match_classical_enumeration() {
    let mut r = rng(1);
    for _ in 0..50 {
        let n = r.random_range(2..=7);
        let d = r.random_range(1..=3);
        let k = r.random_range(1..=3.min(n));
        let points: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| r.random_range(-5.0..5.0)).collect())
            .collect();
        let data = Dataset::new(points.iter().cloned().map(MissingPoint::complete).collect()).unwrap();
        let got = exact_k_means(&data, k).unwrap().opt_cost;
        assert!(close(got, classical_optimum(&points, k), 1e-9));
    }
}

#[test]
fn optimum_is_reported_partition_cost() {
    let mut r = rng(2);
    for _ in 0..50 {
        let n = r.random_range(2..=7);
        let data = gritty_instance(&mut r, n, 3);
        let k = r.random_range(1..=3.min(n));
        let res = exact_k_means(&data, k).unwrap();
        let total: f64 = (0..k)
            .map(|t| {
                let members: Vec<usize> = (0..n).filter(|&x| res.partition[x] == t).collect();
                if members.is_empty() {
                    return 0.0;
                }
                let c = centroid(&data, &members).unwrap();
                cost(&data, &members, c.view()).unwrap()
            })
            .sum();
        assert!(close(total, res.opt_cost, 1e-9));
    }
}

#[test]
fn permuting_points_keeps_the_optimum() {
    let mut r = rng(3);
    for _ in 0..30 {
        let n = r.random_range(3..=7);
        let data = random_instance(&mut r, n, 3, 1);
        let mut order: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            order.swap(i, r.random_range(0..=i));
        }
        let pts = data.to_points();
        let shuffled = Dataset::new(order.iter().map(|&x| pts[x].clone()).collect()).unwrap();
        let a = exact_k_means(&data, 2).unwrap();
        let b = exact_k_means(&shuffled, 2).unwrap();
        assert!(close(a.opt_cost, b.opt_cost, 1e-9));
        // Same grouping up to relabelling.
        for i in 0..n {
            for j in 0..n {
                let together_b = b.partition[i] == b.partition[j];
                let together_a = a.partition[order[i]] == a.partition[order[j]];
                if together_a != together_b {
                    // A tie between two optimal partitions is the only excuse.
                    let mut relabelled = vec![0; n];
                    for (pos, &x) in order.iter().enumerate() {
                        relabelled[x] = b.partition[pos];
                    }
                    let alt: f64 = (0..2)
                        .map(|t| {
                            let m: Vec<usize> = (0..n).filter(|&x| relabelled[x] == t).collect();
                            if m.is_empty() {
                                0.0
                            } else {
                                cost(&data, &m, centroid(&data, &m).unwrap().view()).unwrap()
                            }
                        })
                        .sum();
                    assert!(close(alt, a.opt_cost, 1e-9));
                }
            }
        }
    }
}

#[test]
fn lloyd_costs_never_rise() {
    let mut r = rng(4);
    for _ in 0..100 {
        let n = r.random_range(3..=25);
        let data = random_instance(&mut r, n, 4, 2);
        let k = r.random_range(1..=3);
        let res = lloyd_baseline(&data, k, 50, &mut r).unwrap();
        for w in res.cost_history.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-12) + 1e-12, "{:?}", res.cost_history);
        }
    }
}

#[test]
fn lloyd_without_rounds_returns_seeding() {
    let mut r = rng(5);
    let data = random_instance(&mut r, 10, 3, 1);
    let res = lloyd_baseline(&data, 3, 0, &mut r).unwrap();
    assert_eq!(res.rounds, 0);
    assert_eq!(res.cost_history, vec![res.clustering.cost]);
    assert!(res.clustering.centers.iter().all(MissingPoint::is_complete));
}

#[test]
fn oracle_bounds_lloyd_from_below() {
    let mut r = rng(6);
    for _ in 0..40 {
        let n = r.random_range(3..=8);
        let data = random_instance(&mut r, n, 3, 2);
        let k = r.random_range(1..=3.min(n));
        let opt = exact_k_means(&data, k).unwrap().opt_cost;
        let lloyd = lloyd_baseline(&data, k, 20, &mut r).unwrap();
        assert!(lloyd.clustering.cost >= opt * (1.0 - 1e-9) - 1e-9);
    }
}

#[test]
fn separable_data_converges_in_one_round() {
    let data = Dataset::new(
        [0.0, 0.5, 100.0, 100.5]
            .iter()
            .map(|&v| MissingPoint::complete(vec![v, v]))
            .collect(),
    )
    .unwrap();
    let opt = exact_k_means(&data, 2).unwrap().opt_cost;
    for seed in 0..20 {
        let mut r = rng(seed);
        let res = lloyd_baseline(&data, 2, 10, &mut r).unwrap();
        let seeded_apart = res.cost_history[0] < 1000.0;
        if seeded_apart {
            assert_eq!(res.rounds, 1);
            assert!(close(res.clustering.cost, opt, 1e-9));
        }
    }
}

#[test]
fn budget_and_execution() {
    let mut r = rng(7);
    let data = random_instance(&mut r, 9, 3, 1);
    let seq = exact_k_means_with(
        &data,
        3,
        ExactOptions {
            execution: Execution::Sequential,
            ..Default::default()
        },
    )
    .unwrap();
    let par = exact_k_means(&data, 3).unwrap();
    assert_eq!(seq.opt_cost, par.opt_cost);
    let tight = exact_k_means_with(
        &data,
        3,
        ExactOptions {
            budget: 1000,
            ..Default::default()
        },
    );
    assert_eq!(tight.unwrap_err().exit_code(), 3);
}
