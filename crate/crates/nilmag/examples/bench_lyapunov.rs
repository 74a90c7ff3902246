//! Quick timing probe for Lyapunov runs (not part of the test suite).

use std::time::Instant;

use nilmag::chaos::{mle_benettin, LyapunovConfig};
use nilmag::euler::FieldSpec;
use nilmag::liealg::{InnerProduct, LatticeBasis, LieAlgebra, TwoForm};
use nilmag::linalg;
use nilmag::magext::{extend, MagneticSystem};
use nilmag::orbits::orbit_sample;
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

fn main() {
    let ext = extend(&five_dim_sys()).unwrap();
    let spec = FieldSpec::from_extension(&ext).unwrap();
    let lam0 = orbit_sample(1.0, 5.0, 7).unwrap();

    for (t_end, check) in [(1000.0, false), (1000.0, true)] {
        let cfg = LyapunovConfig { seed: 7, check_convergence: check, ..Default::default() };
        let start = Instant::now();
        let report = mle_benettin(&spec, &lam0, t_end, &cfg).unwrap();
        let dt = start.elapsed();
        println!(
            "t_end={t_end} check={check}: mle={:.6} converged={} in {:.3}s ({:.0} ns/step)",
            report.mle,
            report.converged,
            dt.as_secs_f64(),
            dt.as_secs_f64() / (t_end / 1e-3) * 1e9 / if check { 3.0 } else { 1.0 },
        );
    }
}
