//! Regime survey used while calibrating test budgets (not a test).

use std::time::Instant;

use nilmag::chaos::{mle_benettin, LyapunovConfig};
use nilmag::euler::FieldSpec;
use nilmag::liealg::{InnerProduct, LatticeBasis, LieAlgebra, TwoForm};
use nilmag::linalg;
use nilmag::magext::{extend, MagneticSystem};
use nilmag::orbits::{orbit_sample, seeded_state};
use nilmag::rational::{rat, rat_int};

fn five_dim_sys() -> MagneticSystem {
    let labels = ["U", "V", "X", "Y", "Z"].map(String::from).to_vec();
    let algebra = LieAlgebra::from_brackets(
        labels,
        &[(2, 3, 4, rat_int(1)), (3, 1, 0, rat_int(1))],
    )
    .unwrap();
    let sigma = TwoForm::from_entries(5, &[(2, 0, rat_int(1)), (4, 1, rat_int(1))]).unwrap();
    let mut vectors = linalg::identity(5);
    vectors[0][0] = rat(1, 2);
    vectors[4][4] = rat(1, 2);
    MagneticSystem::new(
        algebra,
        InnerProduct::identity(5),
        sigma,
        Some(LatticeBasis::new(vectors).unwrap()),
        1.0,
    )
    .unwrap()
}

fn heisenberg_sys() -> MagneticSystem {
    let labels = ["X", "Y", "Z"].map(String::from).to_vec();
    let algebra = LieAlgebra::from_brackets(labels, &[(0, 1, 2, rat_int(1))]).unwrap();
    let sigma = TwoForm::from_entries(3, &[(0, 1, rat_int(1))]).unwrap();
    MagneticSystem::new(algebra, InnerProduct::identity(3), sigma, None, 1.0).unwrap()
}

fn main() {
    let ext = extend(&five_dim_sys()).unwrap();
    let geo = FieldSpec::from_extension(&ext).unwrap();

    println!("== chaotic regime: t4 extension orbits, t_end=2000, check on ==");
    for k2 in [5.0, 50.0, 500.0] {
        for seed in 0..5u64 {
            let cfg = LyapunovConfig { seed, ..Default::default() };
            let lam0 = orbit_sample(1.0, k2, seed).unwrap();
            let t0 = Instant::now();
            let r = mle_benettin(&geo, &lam0, 2000.0, &cfg).unwrap();
            println!(
                "k2={k2:><7} seed={seed}: mle={:+.5} converged={} ({:.1}s)",
                r.mle,
                r.converged,
                t0.elapsed().as_secs_f64()
            );
        }
    }

    println!("== scaling: mle(2 lam0) vs 2 mle(lam0) ==");
    let lam0 = orbit_sample(1.0, 5.0, 7).unwrap();
    let cfg = LyapunovConfig { seed: 7, check_convergence: false, ..Default::default() };
    let base = mle_benettin(&geo, &lam0, 2000.0, &cfg).unwrap().mle;
    let doubled: Vec<f64> = lam0.iter().map(|x| 2.0 * x).collect();
    let double = mle_benettin(&geo, &doubled, 2000.0, &cfg).unwrap().mle;
    println!("base={base:.5} doubled={double:.5} ratio={:.3}", double / base);

    println!("== zero-entropy regime: heisenberg magnetic, t_end=1e4, check off ==");
    let h = heisenberg_sys();
    let h_spec = FieldSpec::from_system(&h, Some(1.0)).unwrap();
    let t0 = Instant::now();
    for seed in 0..5u64 {
        let cfg = LyapunovConfig { seed, check_convergence: false, ..Default::default() };
        let lam0 = seeded_state(3, seed);
        let r = mle_benettin(&h_spec, &lam0, 1e4, &cfg).unwrap();
        println!("seed={seed}: mle={:+.6}", r.mle);
    }
    println!("heisenberg 5 seeds took {:.1}s", t0.elapsed().as_secs_f64());

    println!("== zero-entropy regime: 5-dim with exact test field, t_end=1e4 ==");
    let exact_field = TwoForm::from_entries(5, &[(2, 3, rat_int(1))]).unwrap();
    let sys5 = five_dim_sys().with_sigma(exact_field).unwrap();
    let spec5 = FieldSpec::from_system(&sys5, Some(1.0)).unwrap();
    let t0 = Instant::now();
    for seed in 0..5u64 {
        let cfg = LyapunovConfig { seed, check_convergence: false, ..Default::default() };
        let lam0 = seeded_state(5, seed);
        let r = mle_benettin(&spec5, &lam0, 1e4, &cfg).unwrap();
        println!("seed={seed}: mle={:+.6}", r.mle);
    }
    println!("5-dim 5 seeds took {:.1}s", t0.elapsed().as_secs_f64());
}
