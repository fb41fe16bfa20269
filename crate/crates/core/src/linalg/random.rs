use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{Label, PureState, C64};

/// Haar-random single-qubit state on the input label `X`, deterministic in `seed`.
pub fn haar_random_qubit(seed: u64) -> PureState {
    random_qubit_from(&mut ChaCha8Rng::seed_from_u64(seed))
}

/// Normalized pair of standard complex Gaussians, which is uniform on the Bloch sphere.
pub fn random_qubit_from<R: Rng + ?Sized>(rng: &mut R) -> PureState {
    loop {
        let mut draw = || C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        let a = draw();
        let b = draw();
        if let Ok(state) = PureState::normalized(vec![Label::X], vec![a, b]) {
            return state;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        let a = haar_random_qubit(42);
        let b = haar_random_qubit(42);
        let bits = |s: &PureState| -> Vec<(u64, u64)> {
            s.amplitudes().iter().map(|z| (z.re.to_bits(), z.im.to_bits())).collect()
        };
        assert_eq!(bits(&a), bits(&b));
        assert_ne!(bits(&a), bits(&haar_random_qubit(43)));
    }

    #[test]
    fn normalized() {
        for seed in 0..100 {
            assert!((haar_random_qubit(seed).norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bloch_z_averages_to_zero() {
        let n = 10_000;
        let mean: f64 = (0..n)
            .map(|seed| {
                let s = haar_random_qubit(seed);
                s.amplitudes()[0].norm_sqr() - s.amplitudes()[1].norm_sqr()
            })
            .sum::<f64>()
            / n as f64;
        // <sigma_z> is uniform on [-1, 1] with std 1/sqrt(3); 5e-2 is ~8.7 standard errors.
        assert!(mean.abs() < 5e-2, "mean <sigma_z> = {mean}");
    }
}
