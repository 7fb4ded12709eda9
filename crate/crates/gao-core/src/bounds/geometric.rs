//! Moments of the arithmetic and geometric basket averages under the
//! transformed measure.

use num_complex::Complex64;

use crate::error::Result;
use crate::measure::PricingSetup;

/// Characteristic function of the log-geometric basket average:
/// `phi_Y(z) = E~[e^{i z Y_T}] = e^{i z Y_0} E~[e^{-i z <W, X_T>}]`
/// where `W` is the mean tenor exponent and `Y_0` the time-zero
/// log-geometric average.
pub fn geometric_charfn(setup: &PricingSetup, z: Complex64) -> Result<Complex64> {
    let y0 = setup.curve.log_geo_mean_s0();
    let mean_exponent = setup.curve.mean_exponent();
    let s = Complex64::new(0.0, 1.0) * z; // E[e^{izY}] needs E[e^{-(iz)<W,X>}]
    let tail = setup.law.exponent_laplace_complex(s, &mean_exponent)?;
    Ok((Complex64::new(0.0, 1.0) * z * y0).exp() * tail)
}

/// `E~[A_T] = (1/(n-1)) sum_k S_0^(k) L(psi_k)`.
pub fn expected_arithmetic(setup: &PricingSetup) -> Result<f64> {
    let mut sum = 0.0;
    for point in &setup.curve.tenors {
        sum += point.s0() * setup.law.exponent_laplace(&point.psi)?;
    }
    Ok(sum / setup.curve.tenors.len() as f64)
}

/// `E~[G_T] = e^{Y_0} L(W)` with `W` the mean tenor exponent; equals
/// `phi_Y(-i)` of [`geometric_charfn`].
pub fn expected_geometric(setup: &PricingSetup) -> Result<f64> {
    let y0 = setup.curve.log_geo_mean_s0();
    let mean_exponent = setup.curve.mean_exponent();
    Ok(y0.exp() * setup.law.exponent_laplace(&mean_exponent)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::MeasureConvention;
    use crate::reference;
    use approx::assert_abs_diff_eq;

    #[test]
    fn charfn_is_one_at_zero() {
        let setup = reference::table2_setup(0.0, MeasureConvention::Reference).unwrap();
        let v = geometric_charfn(&setup, Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(v, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn charfn_at_minus_i_is_expected_geometric() {
        for conv in [MeasureConvention::Forward, MeasureConvention::Reference] {
            let setup = reference::table2_setup(0.05, conv).unwrap();
            let via_charfn = geometric_charfn(&setup, Complex64::new(0.0, -1.0)).unwrap();
            let direct = expected_geometric(&setup).unwrap();
            assert_abs_diff_eq!(via_charfn.re, direct, epsilon = 1e-12);
            assert_abs_diff_eq!(via_charfn.im, 0.0, epsilon = 1e-12);
        }
    }

    /// Under the forward convention the arithmetic mean restates the bond
    /// curve: `E~[A] = (1/(n-1)) sum P(0,T+k) / P(0,T)`.
    #[test]
    fn arithmetic_mean_equals_bond_ratios() {
        let setup = reference::table2_setup(0.0, MeasureConvention::Forward).unwrap();
        let ea = expected_arithmetic(&setup).unwrap();
        let bond_route = setup.bond_curve.iter().sum::<f64>()
            / (setup.curve.p0_horizon * setup.curve.tenors.len() as f64);
        assert_abs_diff_eq!(ea, bond_route, epsilon = 1e-10 * ea);
    }

    #[test]
    fn geometric_below_arithmetic() {
        for conv in [MeasureConvention::Forward, MeasureConvention::Reference] {
            let setup = reference::table2_setup(0.1, conv).unwrap();
            let ea = expected_arithmetic(&setup).unwrap();
            let eg = expected_geometric(&setup).unwrap();
            assert!(eg <= ea + 1e-12, "AM-GM violated: {eg} > {ea}");
        }
    }

    /// Single-tenor basket: geometric and arithmetic averages coincide and
    /// the charfn collapses to the single asset's.
    #[test]
    fn single_tenor_collapse() {
        use crate::affine::ContractSpec;
        use crate::measure::build_setup;
        let model = crate::affine::Model::Cir(reference::mcir_model(0.0).unwrap());
        let contract = ContractSpec::new(0.5, 15, 2).unwrap();
        let setup = build_setup(&model, &contract, MeasureConvention::Forward).unwrap();
        let ea = expected_arithmetic(&setup).unwrap();
        let eg = expected_geometric(&setup).unwrap();
        assert_abs_diff_eq!(ea, eg, epsilon = 1e-14);
        let z = Complex64::new(0.7, 0.0);
        let phi = geometric_charfn(&setup, z).unwrap();
        let point = &setup.curve.tenors[0];
        let direct = (Complex64::new(0.0, 1.0) * z * point.ln_s0).exp()
            * setup
                .law
                .exponent_laplace_complex(Complex64::new(0.0, 1.0) * z, &point.psi)
                .unwrap();
        assert_abs_diff_eq!(phi.re, direct.re, epsilon = 1e-12);
        assert_abs_diff_eq!(phi.im, direct.im, epsilon = 1e-12);
    }
}
