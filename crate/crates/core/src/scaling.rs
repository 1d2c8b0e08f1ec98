//! Semi-empirical scaling laws: through-origin least-squares fits of the four
//! linear relations
//!
//! ```text
//! h  = C_h · d          ṁ_a = C_m · h·d
//! P  = C_p · U_d·d²     T   = C_t · ṁ_a·√U_d
//! ```
//!
//! and synthesis of complete designs from a (power, voltage) target.

use serde::{Deserialize, Serialize};

use crate::dataset::{eta_anode, isp_anode, Dataset};
use crate::{Error, Result};

/// z-value of the symmetric 95% band under the Gaussian residual model.
pub const BAND_Z95: f64 = 1.96;

/// One fitted linear relation y = slope·x with no intercept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedRelation {
    pub slope: f64,
    /// Root mean squared through-origin residual.
    pub sigma: f64,
    /// Uncentered coefficient of determination 1 − Σ(y−ŷ)²/Σy².
    pub r_squared: f64,
}

impl FittedRelation {
    /// Closed-form through-origin least squares: slope = Σxy/Σx².
    fn fit(pairs: &[(f64, f64)]) -> Result<Self> {
        let sum_xx: f64 = pairs.iter().map(|(x, _)| x * x).sum();
        if sum_xx <= 0.0 {
            return Err(Error::domain(
                "through-origin fit needs a non-degenerate regressor",
            ));
        }
        let sum_xy: f64 = pairs.iter().map(|(x, y)| x * y).sum();
        let slope = sum_xy / sum_xx;
        let ss_res: f64 = pairs.iter().map(|(x, y)| (y - slope * x).powi(2)).sum();
        let ss_tot: f64 = pairs.iter().map(|(_, y)| y * y).sum();
        Ok(Self {
            slope,
            sigma: (ss_res / pairs.len() as f64).sqrt(),
            r_squared: 1.0 - ss_res / ss_tot,
        })
    }

    pub fn predict(&self, x: f64) -> f64 {
        self.slope * x
    }

    /// Symmetric 95% prediction band around the point estimate.
    pub fn band(&self, x: f64) -> (f64, f64) {
        let point = self.predict(x);
        (point - BAND_Z95 * self.sigma, point + BAND_Z95 * self.sigma)
    }
}

/// The four fitted scaling coefficients with their residual diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingCoefficients {
    /// h vs d.
    pub h_relation: FittedRelation,
    /// ṁ_a vs h·d.
    pub mdot_relation: FittedRelation,
    /// P vs U_d·d².
    pub power_relation: FittedRelation,
    /// T vs ṁ_a·√U_d.
    pub thrust_relation: FittedRelation,
    pub n_records: usize,
}

impl ScalingCoefficients {
    /// Channel width over mean diameter [-].
    pub fn c_h(&self) -> f64 {
        self.h_relation.slope
    }

    /// Flow density coefficient [mg/(s·mm²)].
    pub fn c_m(&self) -> f64 {
        self.mdot_relation.slope
    }

    /// Power coefficient [W/(V·mm²)].
    pub fn c_p(&self) -> f64 {
        self.power_relation.slope
    }

    /// Thrust coefficient [mN/((mg/s)·V^½)].
    pub fn c_t(&self) -> f64 {
        self.thrust_relation.slope
    }
}

/// A synthesized design with a 95% band per output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignPoint {
    pub power_w: f64,
    pub ud_v: f64,
    pub d_mm: f64,
    pub h_mm: f64,
    pub mdot_mg_s: f64,
    pub thrust_mn: f64,
    pub isp_s: f64,
    pub eta_anode: f64,
    pub d_band: (f64, f64),
    pub h_band: (f64, f64),
    pub mdot_band: (f64, f64),
    pub thrust_band: (f64, f64),
    pub isp_band: (f64, f64),
    pub eta_band: (f64, f64),
}

/// Fits all four scaling coefficients on a dataset by closed-form
/// through-origin least squares.
pub fn fit_scaling(dataset: &Dataset) -> Result<ScalingCoefficients> {
    let records = dataset.records();
    if records.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            got: records.len(),
        });
    }
    let h_relation = FittedRelation::fit(
        &records.iter().map(|r| (r.d_mm, r.h_mm)).collect::<Vec<_>>(),
    )?;
    let mdot_relation = FittedRelation::fit(
        &records
            .iter()
            .map(|r| (r.h_mm * r.d_mm, r.mdot_mg_s))
            .collect::<Vec<_>>(),
    )?;
    let power_relation = FittedRelation::fit(
        &records
            .iter()
            .map(|r| (r.ud_v * r.d_mm * r.d_mm, r.power_w))
            .collect::<Vec<_>>(),
    )?;
    let thrust_relation = FittedRelation::fit(
        &records
            .iter()
            .map(|r| (r.mdot_mg_s * r.ud_v.sqrt(), r.thrust_mn))
            .collect::<Vec<_>>(),
    )?;
    let coeffs = ScalingCoefficients {
        h_relation,
        mdot_relation,
        power_relation,
        thrust_relation,
        n_records: records.len(),
    };
    for (name, value) in [
        ("c_h", coeffs.c_h()),
        ("c_m", coeffs.c_m()),
        ("c_p", coeffs.c_p()),
        ("c_t", coeffs.c_t()),
    ] {
        if !(value > 0.0) {
            return Err(Error::domain(format!(
                "fitted {name}={value} violates positivity; the data does not follow the scaling form"
            )));
        }
    }
    if coeffs.c_h() >= 1.0 {
        return Err(Error::domain(format!(
            "fitted c_h={} must stay below 1 (h < d)",
            coeffs.c_h()
        )));
    }
    Ok(coeffs)
}

/// Chains the fitted relations into a complete design for a (P, U_d) target:
/// d = √(P/(C_p·U)), h = C_h·d, ṁ = C_m·h·d, T = C_t·ṁ·√U, then anode Isp
/// and efficiency.
///
/// Bands come from each relation's residual sigma; the d band maps the power
/// residual through the local slope ∂P/∂d. Isp and efficiency bands transform
/// the thrust band with the flow held at its point estimate (thrust floored
/// at zero so the transforms stay monotone).
pub fn synthesize_design(
    power_w: f64,
    ud_v: f64,
    coeffs: &ScalingCoefficients,
) -> Result<DesignPoint> {
    if power_w <= 0.0 || ud_v <= 0.0 {
        return Err(Error::domain(format!(
            "design targets must be positive, got power={power_w}, voltage={ud_v}"
        )));
    }
    let d_mm = (power_w / (coeffs.c_p() * ud_v)).sqrt();
    let h_mm = coeffs.c_h() * d_mm;
    let mdot_mg_s = coeffs.c_m() * h_mm * d_mm;
    let thrust_mn = coeffs.c_t() * mdot_mg_s * ud_v.sqrt();
    let isp_s = isp_anode(thrust_mn, mdot_mg_s)?;
    let eta = eta_anode(thrust_mn, mdot_mg_s, power_w)?;

    let half_d = BAND_Z95 * coeffs.power_relation.sigma / (2.0 * coeffs.c_p() * ud_v * d_mm);
    let d_band = (d_mm - half_d, d_mm + half_d);
    let h_band = coeffs.h_relation.band(d_mm);
    let mdot_band = coeffs.mdot_relation.band(h_mm * d_mm);
    let thrust_band = coeffs.thrust_relation.band(mdot_mg_s * ud_v.sqrt());

    let thrust_low = thrust_band.0.max(0.0);
    let isp_band = (
        isp_anode(thrust_low, mdot_mg_s)?,
        isp_anode(thrust_band.1.max(0.0), mdot_mg_s)?,
    );
    let eta_band = (
        eta_anode(thrust_low, mdot_mg_s, power_w)?,
        eta_anode(thrust_band.1.max(0.0), mdot_mg_s, power_w)?,
    );

    Ok(DesignPoint {
        power_w,
        ud_v,
        d_mm,
        h_mm,
        mdot_mg_s,
        thrust_mn,
        isp_s,
        eta_anode: eta,
        d_band,
        h_band,
        mdot_band,
        thrust_band,
        isp_band,
        eta_band,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{Dataset, ThrusterRecord};
    use crate::fixture;
    use approx::assert_relative_eq;

    /// Synthetic dataset satisfying all four relations exactly.
    fn exact_dataset(c_h: f64, c_m: f64, c_p: f64, c_t: f64) -> Dataset {
        let mut records = Vec::new();
        for (i, (d, u)) in [(20.0, 200.0), (35.0, 250.0), (50.0, 300.0), (65.0, 350.0)]
            .iter()
            .enumerate()
        {
            let h = c_h * d;
            let mdot = c_m * h * d;
            let power = c_p * u * d * d;
            let thrust = c_t * mdot * u.sqrt();
            records.push(ThrusterRecord {
                name: format!("synth-{i}"),
                power_w: power,
                ud_v: *u,
                d_mm: *d,
                h_mm: h,
                l_mm: 25.0,
                mdot_mg_s: mdot,
                thrust_mn: thrust,
                isp_s: isp_anode(thrust, mdot).unwrap(),
            });
        }
        Dataset::new(records).unwrap()
    }

    #[test]
    fn recovers_exact_thrust_coefficient() {
        let ds = exact_dataset(0.25, 0.003, 0.0006, 2.0);
        let coeffs = fit_scaling(&ds).unwrap();
        assert_relative_eq!(coeffs.c_t(), 2.0, max_relative = 1e-9);
        assert_relative_eq!(coeffs.c_h(), 0.25, max_relative = 1e-9);
        assert!(coeffs.thrust_relation.sigma < 1e-9);
    }

    #[test]
    fn rejects_underdetermined_input() {
        let ds = Dataset::new(vec![ThrusterRecord {
            name: "only".into(),
            power_w: 200.0,
            ud_v: 250.0,
            d_mm: 21.0,
            h_mm: 5.6,
            l_mm: 11.2,
            mdot_mg_s: 0.94,
            thrust_mn: 12.8,
            isp_s: 1390.0,
        }])
        .unwrap();
        assert!(matches!(
            fit_scaling(&ds).unwrap_err(),
            Error::InsufficientData { needed: 3, got: 1 }
        ));
    }

    #[test]
    fn fixture_coefficients_match_closed_form() {
        // Independently computed Σxy/Σx² slopes over the bundled table.
        let coeffs = fit_scaling(&fixture::dataset()).unwrap();
        assert_relative_eq!(coeffs.c_h(), 0.2182227804693263, max_relative = 1e-9);
        assert_relative_eq!(coeffs.c_m(), 0.0027627487702061317, max_relative = 1e-9);
        assert_relative_eq!(coeffs.c_p(), 0.0005345365629317989, max_relative = 1e-9);
        assert_relative_eq!(coeffs.c_t(), 0.8626697366870164, max_relative = 1e-9);
        assert_relative_eq!(
            coeffs.thrust_relation.r_squared,
            0.9941735437216237,
            max_relative = 1e-9
        );
    }

    #[test]
    fn unit_diameter_self_check() {
        let mut coeffs = fit_scaling(&fixture::dataset()).unwrap();
        coeffs.power_relation.slope = 1.0;
        let design = synthesize_design(300.0, 300.0, &coeffs).unwrap();
        assert_relative_eq!(design.d_mm, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn design_matches_hand_chained_oracle() {
        let coeffs = fit_scaling(&fixture::dataset()).unwrap();
        let design = synthesize_design(200.0, 250.0, &coeffs).unwrap();
        // chain computed independently from the frozen slopes
        assert_relative_eq!(design.d_mm, 38.68621891899537, max_relative = 1e-9);
        assert_relative_eq!(design.h_mm, 8.442214258348224, max_relative = 1e-9);
        assert_relative_eq!(design.mdot_mg_s, 0.9023064241905067, max_relative = 1e-9);
        assert_relative_eq!(design.thrust_mn, 12.307465204146261, max_relative = 1e-9);
        assert_relative_eq!(design.isp_s, 1390.8935449050848, max_relative = 1e-9);
        assert_relative_eq!(design.eta_anode, 0.419684753677676, max_relative = 1e-9);
    }

    #[test]
    fn doubling_power_scales_diameter_by_sqrt2() {
        let coeffs = fit_scaling(&fixture::dataset()).unwrap();
        let a = synthesize_design(300.0, 300.0, &coeffs).unwrap();
        let b = synthesize_design(600.0, 300.0, &coeffs).unwrap();
        assert_relative_eq!(b.d_mm, a.d_mm * 2.0_f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn design_satisfies_relations_on_resubstitution() {
        let coeffs = fit_scaling(&fixture::dataset()).unwrap();
        let p = synthesize_design(450.0, 320.0, &coeffs).unwrap();
        assert_relative_eq!(p.h_mm, coeffs.c_h() * p.d_mm, max_relative = 1e-12);
        assert_relative_eq!(
            p.mdot_mg_s,
            coeffs.c_m() * p.h_mm * p.d_mm,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            p.power_w,
            coeffs.c_p() * p.ud_v * p.d_mm * p.d_mm,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            p.thrust_mn,
            coeffs.c_t() * p.mdot_mg_s * p.ud_v.sqrt(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn thrust_is_nondecreasing_in_power() {
        let coeffs = fit_scaling(&fixture::dataset()).unwrap();
        let mut last = 0.0;
        for i in 1..=20 {
            let p = synthesize_design(50.0 * i as f64, 300.0, &coeffs).unwrap();
            assert!(p.thrust_mn >= last);
            last = p.thrust_mn;
        }
    }

    #[test]
    fn band_arithmetic() {
        let relation = FittedRelation {
            slope: 1.0,
            sigma: 1.0,
            r_squared: 1.0,
        };
        let (low, high) = relation.band(10.0);
        assert_relative_eq!(low, 8.04, max_relative = 1e-12);
        assert_relative_eq!(high, 11.96, max_relative = 1e-12);

        let exact = FittedRelation {
            slope: 2.0,
            sigma: 0.0,
            r_squared: 1.0,
        };
        assert_eq!(exact.band(3.0), (6.0, 6.0));
    }

    #[test]
    fn bands_contain_the_point_estimate() {
        let coeffs = fit_scaling(&fixture::dataset()).unwrap();
        for (p, u) in [(100.0, 200.0), (400.0, 300.0), (900.0, 500.0)] {
            let d = synthesize_design(p, u, &coeffs).unwrap();
            for (low, point, high) in [
                (d.d_band.0, d.d_mm, d.d_band.1),
                (d.h_band.0, d.h_mm, d.h_band.1),
                (d.mdot_band.0, d.mdot_mg_s, d.mdot_band.1),
                (d.thrust_band.0, d.thrust_mn, d.thrust_band.1),
                (d.isp_band.0, d.isp_s, d.isp_band.1),
                (d.eta_band.0, d.eta_anode, d.eta_band.1),
            ] {
                assert!(low <= point && point <= high, "{low} <= {point} <= {high}");
                assert!(point > 0.0);
            }
        }
    }

    #[test]
    fn rejects_nonpositive_targets() {
        let coeffs = fit_scaling(&fixture::dataset()).unwrap();
        assert!(synthesize_design(0.0, 300.0, &coeffs).is_err());
        assert!(synthesize_design(300.0, -1.0, &coeffs).is_err());
    }
}
