use localchern::fixtures::{self, Fixture};
use localchern::oracle::{count_special_points, deformed_system, OracleConfig, OracleReport};

fn run(f: &Fixture, cfg: &OracleConfig) -> OracleReport {
    count_special_points(&f.germ, &f.collection, cfg).unwrap_or_else(|e| panic!("{}: {e}", f.name))
}

fn quick() -> Vec<(Fixture, usize)> {
    vec![
        (fixtures::smooth_cubic(), 4),
        (fixtures::smooth_two_blocks(), 1),
        (fixtures::cone_dxy(), 4),
        (fixtures::a2_dx(), 1),
        (fixtures::cusp_dx(), 1),
    ]
}

#[test]
fn accepted_points_are_stable_under_more_newton_steps() {
    let cfg = OracleConfig::default();
    for (f, _) in quick() {
        let report = run(&f, &cfg);
        let system = deformed_system(&f.germ, &f.collection, &cfg, 0, 0).unwrap();
        for p in &report.points {
            let mut z = p.solution.clone();
            for _ in 0..10 {
                if system.newton_step(&mut z).is_none() {
                    break;
                }
            }
            let moved = z.iter().zip(&p.solution).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(moved < cfg.dedup_tol, "{}: moved {moved:e}", f.name);
            assert!(p.residual < cfg.newton_tol);
        }
    }
}

#[test]
fn counts_survive_a_smaller_deformation() {
    for f in [fixtures::smooth_cubic(), fixtures::cone_dxy(), fixtures::cone_weighted()] {
        let base = run(&f, &OracleConfig::default()).count;
        let small = OracleConfig {
            lambda_magnitude: 1e-3,
            ..OracleConfig::default()
        };
        assert_eq!(run(&f, &small).count, base, "{}", f.name);
    }
}

#[test]
fn every_block_drops_exactly_one_rank_at_each_point() {
    for (f, _) in quick() {
        let report = run(&f, &OracleConfig::default());
        let big_n = f.germ.nvars();
        for p in &report.points {
            let expected: Vec<usize> = f.partition.iter().map(|k| big_n - k).collect();
            assert_eq!(p.block_ranks, expected, "{}", f.name);
        }
    }
}

#[test]
fn counts_match_and_charts_agree() {
    for (f, expected) in quick() {
        for seed in [0, 1] {
            let report = run(&f, &OracleConfig { seed, ..OracleConfig::default() });
            assert_eq!(report.count, expected, "{} seed {seed}", f.name);
            assert_eq!(report.points.len(), expected);
            assert_eq!((report.deformations_agreeing, report.charts_agreeing), (3, 2));
        }
    }
}

#[test]
fn points_lie_inside_the_ball_and_off_the_singular_locus() {
    let cfg = OracleConfig::default();
    for (f, _) in quick() {
        for p in run(&f, &cfg).points {
            let r = p.x.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
            assert!(r < cfg.ball_radius);
            for g in f.germ.equations() {
                let z: Vec<num_complex::Complex64> = p.x.iter().map(|(a, b)| num_complex::Complex64::new(*a, *b)).collect();
                assert!(g.evaluate_complex(&z).norm() < 1e-9);
            }
        }
    }
}
