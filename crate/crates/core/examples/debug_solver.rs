use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use representer::*;

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random::<f64>().max(1e-300);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(501);
    let p_grid = [1.3, 2.0, 3.0, 5.0];
    for trial in 0..40 {
        let n: usize = rng.random_range(2..=6);
        let m_lo = n.saturating_sub(3).max(1);
        let m = rng.random_range(m_lo..=m_lo.max(3.min(n)));
        let p = p_grid[trial % p_grid.len()];
        let space = PNormSpace::new(n, p).unwrap();
        let functionals: Vec<Functional<f64>> = (0..m)
            .map(|_| Functional::new((0..n).map(|_| normal(&mut rng)).collect()))
            .collect();
        let hidden = Element::new((0..n).map(|_| normal(&mut rng)).collect());
        let targets: Vec<f64> = functionals
            .iter()
            .map(|l| space.pairing(l, &hidden).unwrap())
            .collect();
        let problem = InterpolationProblem::new(space, functionals.clone(), targets.clone()).unwrap();
        match solve_min_norm(&problem, 1e-9, 500) {
            Ok(sol) => println!("trial {trial}: p={p} n={n} m={m} OK iters={}", sol.iterations),
            Err(e) => {
                println!("trial {trial}: p={p} n={n} m={m} FAIL {e}");
                for f in &functionals { println!("  L = {:?}", f.coords()); }
                println!("  y = {:?}", targets);
            }
        }
    }
}
