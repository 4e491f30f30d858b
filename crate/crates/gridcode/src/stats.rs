//! Distribution tails for the statistics computed in the core crate.

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Upper tail `Pr[X >= stat]` for `X ~ chi^2(dof)`. One when `dof = 0`.
pub fn chi_square_p_value(stat: f64, dof: u64) -> f64 {
    if dof == 0 {
        return 1.0;
    }
    let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
    dist.sf(stat)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_quantiles() {
        // 95% quantiles of chi^2 with 1 and 10 degrees of freedom.
        assert!((chi_square_p_value(3.841_459, 1) - 0.05).abs() < 1e-6);
        assert!((chi_square_p_value(18.307_04, 10) - 0.05).abs() < 1e-6);
        assert_eq!(chi_square_p_value(5.0, 0), 1.0);
        assert!((chi_square_p_value(0.0, 4) - 1.0).abs() < 1e-12);
    }
}
