//! Scaled non-central chi-square: the law of `chi2(nu, .)/c`.
//!
//! Non-centrality conventions differ by factors of two across references, so
//! this type pins one and sticks to it: `lambda` is the Poisson mixture rate.
//! The density is `sum_k e^{-lambda} lambda^k / k! f_{chi2(nu + 2k)}(c x) c`,
//! the mean is `(nu + 2 lambda) / c` and the moment generating function is
//!
//! ```text
//! M(s) = beta(s)^{nu/2} exp(lambda (beta(s) - 1)),    beta(s) = 1/(1 - 2 s / c)
//! ```
//!
//! valid on `Re(s) < c/2`.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Gamma, Poisson};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoncentralChiSquareScaled {
    /// Degrees of freedom.
    pub nu: f64,
    /// Non-centrality as the Poisson mixture rate.
    pub lambda: f64,
    /// Scale divisor.
    pub c: f64,
}

impl NoncentralChiSquareScaled {
    pub fn new(nu: f64, lambda: f64, c: f64) -> Result<Self> {
        if !(nu > 0.0) {
            return Err(Error::invalid("degrees of freedom must be positive"));
        }
        if !(lambda >= 0.0) {
            return Err(Error::invalid("non-centrality must be non-negative"));
        }
        if !(c > 0.0) {
            return Err(Error::invalid("scale divisor must be positive"));
        }
        Ok(NoncentralChiSquareScaled { nu, lambda, c })
    }

    pub fn mean(&self) -> f64 {
        (self.nu + 2.0 * self.lambda) / self.c
    }

    pub fn variance(&self) -> f64 {
        2.0 * (self.nu + 4.0 * self.lambda) / (self.c * self.c)
    }

    /// Moment generating function at a complex argument.
    pub fn mgf(&self, s: Complex64) -> Result<Complex64> {
        if s.re >= self.c / 2.0 {
            return Err(Error::DivergentTransform(format!(
                "mgf argument Re(s) = {} outside the strip Re(s) < c/2 = {}",
                s.re,
                self.c / 2.0
            )));
        }
        let one = Complex64::new(1.0, 0.0);
        let beta = one / (one - 2.0 * s / self.c);
        Ok(beta.powf(self.nu / 2.0) * (self.lambda * (beta - one)).exp())
    }

    /// Laplace transform `E[e^{-v X}]` for real `v > -c/2`.
    pub fn laplace(&self, v: f64) -> Result<f64> {
        Ok(self.mgf(Complex64::new(-v, 0.0))?.re)
    }

    /// Characteristic function `E[e^{i t X}]`.
    pub fn charfn(&self, t: f64) -> Complex64 {
        // the strip condition cannot fail on the imaginary axis
        self.mgf(Complex64::new(0.0, t)).expect("imaginary axis is inside the strip")
    }

    /// Exact draw: Poisson-mixed central chi-square divided by the scale.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let k = if self.lambda > 0.0 {
            Poisson::new(self.lambda).expect("validated rate").sample(rng)
        } else {
            0.0
        };
        let shape = 0.5 * self.nu + k;
        Gamma::new(shape, 2.0).expect("validated shape").sample(rng) / self.c
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn mgf_is_one_at_zero() {
        let law = NoncentralChiSquareScaled::new(3.0, 0.7, 4.0).unwrap();
        let m = law.mgf(Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(m, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn central_case_is_plain_chi_square() {
        let law = NoncentralChiSquareScaled::new(5.0, 0.0, 2.0).unwrap();
        let s = Complex64::new(0.3, 0.0);
        let expect = (1.0 - 2.0 * 0.3 / 2.0f64).powf(-2.5);
        assert_abs_diff_eq!(law.mgf(s).unwrap().re, expect, epsilon = 1e-14);
    }

    #[test]
    fn rejects_arguments_outside_strip() {
        let law = NoncentralChiSquareScaled::new(3.0, 0.7, 4.0).unwrap();
        assert!(law.mgf(Complex64::new(2.0, 0.0)).is_err());
        assert!(law.laplace(-2.0).is_err());
    }

    // Lanczos log-gamma, test-only helper for the density oracle.
    fn ln_gamma(x: f64) -> f64 {
        const G: [f64; 9] = [
            0.999_999_999_999_809_93,
            676.520_368_121_885_1,
            -1259.139_216_722_402_8,
            771.323_428_777_653_13,
            -176.615_029_162_140_6,
            12.507_343_278_686_905,
            -0.138_571_095_265_720_12,
            9.984_369_578_019_571_6e-6,
            1.505_632_735_149_311_6e-7,
        ];
        if x < 0.5 {
            let pi = std::f64::consts::PI;
            return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
        }
        let x = x - 1.0;
        let mut a = G[0];
        let t = x + 7.5;
        for (i, g) in G.iter().enumerate().skip(1) {
            a += g / (x + i as f64);
        }
        0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
    }

    fn chi2_pdf(m: f64, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        ((0.5 * m - 1.0) * x.ln() - 0.5 * x - 0.5 * m * 2f64.ln() - ln_gamma(0.5 * m)).exp()
    }

    /// Series density of the scaled law, truncated once the Poisson mass
    /// beyond the last term drops below 1e-12.
    fn density_series(law: &NoncentralChiSquareScaled, x: f64) -> f64 {
        let mut total = 0.0;
        let mut pk = (-law.lambda).exp(); // Poisson(k=0) mass
        let mut cum = pk;
        let mut k = 0u32;
        loop {
            total += pk * chi2_pdf(law.nu + 2.0 * f64::from(k), law.c * x) * law.c;
            if 1.0 - cum < 1e-12 {
                break;
            }
            k += 1;
            pk *= law.lambda / f64::from(k);
            cum += pk;
            if k > 10_000 {
                break;
            }
        }
        total
    }

    /// Brute-force oracle: integrate e^{s x} against the series density.
    #[test]
    fn mgf_matches_density_integration() {
        let law = NoncentralChiSquareScaled::new(3.0, 0.7, 4.0).unwrap();
        let s = 0.1;
        // Simpson panels in y = sqrt(x), removing the density's sqrt
        // singularity at the origin
        let upper = (law.mean() + 60.0 * law.variance().sqrt()).sqrt();
        let n = 20_000;
        let h = upper / n as f64;
        let mut integral = 0.0;
        for i in 0..n {
            let a = i as f64 * h;
            let f = |y: f64| 2.0 * y * (s * y * y).exp() * density_series(&law, y * y);
            integral += h / 6.0 * (f(a) + 4.0 * f(a + 0.5 * h) + f(a + h));
        }
        let mgf = law.mgf(Complex64::new(s, 0.0)).unwrap().re;
        assert_abs_diff_eq!(integral, mgf, epsilon = 1e-6);
    }

    #[test]
    fn sampler_mean_matches_formula() {
        let law = NoncentralChiSquareScaled::new(2.0, 1.3, 5.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 1_000_000;
        let draws: Vec<f64> = (0..n).map(|_| law.sample(&mut rng)).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let se = (var / n as f64).sqrt();
        assert!(
            (mean - law.mean()).abs() < 4.0 * se,
            "sample mean {mean} vs {} (se {se})",
            law.mean()
        );
    }

    #[test]
    fn central_sampler_is_exponential_for_two_dof() {
        let law = NoncentralChiSquareScaled::new(2.0, 0.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 200_000;
        let mean = (0..n).map(|_| law.sample(&mut rng)).sum::<f64>() / n as f64;
        assert!((mean - 2.0).abs() < 0.03, "mean of chi2(2) should be 2, got {mean}");
    }

    #[test]
    fn sampler_matches_mgf() {
        let law = NoncentralChiSquareScaled::new(3.0, 0.7, 4.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let n = 1_000_000;
        let vals: Vec<f64> = (0..n).map(|_| (-0.3 * law.sample(&mut rng)).exp()).collect();
        let mean = vals.iter().sum::<f64>() / n as f64;
        let var = vals.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let se = (var / n as f64).sqrt();
        let exact = law.laplace(0.3).unwrap();
        assert!((mean - exact).abs() < 4.0 * se, "{mean} vs {exact} (se {se})");
    }
}
