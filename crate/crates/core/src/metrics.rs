//! Forecast error measures: MFE, RMSE, MAE, MAPE and the per-sample error
//! series behind them.

use alloc::vec::Vec;

use thiserror::Error;

use crate::math;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("predicted has {predicted} values, realized has {realized}")]
    LengthMismatch { predicted: usize, realized: usize },
    #[error("no samples to evaluate")]
    Empty,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EvalReport {
    pub n: usize,
    /// Mean signed error `mean(sigma - RV)`.
    pub mfe: f64,
    pub rmse: f64,
    pub mae: f64,
    /// Mean absolute relative error as a fraction; `None` when some
    /// realized value is zero.
    pub mape: Option<f64>,
    pub error_series: Vec<f64>,
    /// `(sigma - RV) / RV`; `None` where RV is zero.
    pub error_pct_series: Vec<Option<f64>>,
}

impl EvalReport {
    /// Derived: `rmse^2`.
    pub fn mse(&self) -> f64 {
        self.rmse * self.rmse
    }
}

pub fn evaluate(predicted: &[f64], realized: &[f64]) -> Result<EvalReport, MetricsError> {
    if predicted.len() != realized.len() {
        return Err(MetricsError::LengthMismatch {
            predicted: predicted.len(),
            realized: realized.len(),
        });
    }
    if predicted.is_empty() {
        return Err(MetricsError::Empty);
    }
    let n = predicted.len();
    let nf = n as f64;
    let errors: Vec<f64> = predicted.iter().zip(realized).map(|(s, rv)| s - rv).collect();
    let pct: Vec<Option<f64>> = errors
        .iter()
        .zip(realized)
        .map(|(e, rv)| (*rv != 0.0).then(|| e / rv))
        .collect();
    let mfe = errors.iter().sum::<f64>() / nf;
    let mae = errors.iter().map(|e| e.abs()).sum::<f64>() / nf;
    let rmse = math::sqrt(errors.iter().map(|e| e * e).sum::<f64>() / nf);
    let mape = pct
        .iter()
        .try_fold(0.0, |acc, p| p.map(|v| acc + v.abs()))
        .map(|s| s / nf);
    Ok(EvalReport {
        n,
        mfe,
        rmse,
        mae,
        mape,
        error_series: errors,
        error_pct_series: pct,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn perfect_prediction() {
        let r = evaluate(&[0.1, 0.2], &[0.1, 0.2]).unwrap();
        assert_eq!((r.mfe, r.rmse, r.mae, r.mape), (0.0, 0.0, 0.0, Some(0.0)));
        assert_eq!(r.error_series, vec![0.0, 0.0]);
    }

    #[test]
    fn worked_examples() {
        let r = evaluate(&[0.2, 0.3], &[0.1, 0.2]).unwrap();
        let close = |a: f64, b: f64| (a - b).abs() < 1e-15;
        assert!(close(r.mfe, 0.1) && close(r.mae, 0.1) && close(r.rmse, 0.1));
        assert!(close(r.mape.unwrap(), 0.75));

        let r = evaluate(&[0.1, 0.3], &[0.2, 0.2]).unwrap();
        assert!(r.mfe.abs() < 1e-15);
        assert!(close(r.mae, 0.1) && close(r.rmse, 0.1));
    }

    #[test]
    fn zero_realized_leaves_mape_undefined() {
        let r = evaluate(&[0.1, 0.2], &[0.0, 0.1]).unwrap();
        assert_eq!(r.mape, None);
        assert_eq!(r.error_pct_series[0], None);
        assert!((r.mae - 0.1).abs() < 1e-15);
    }

    #[test]
    fn shape_errors() {
        assert_eq!(evaluate(&[], &[]), Err(MetricsError::Empty));
        assert_eq!(
            evaluate(&[1.0], &[1.0, 2.0]),
            Err(MetricsError::LengthMismatch { predicted: 1, realized: 2 })
        );
    }

    fn pairs() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (1usize..60).prop_flat_map(|n| {
            (
                proptest::collection::vec(-1.0f64..1.0, n),
                proptest::collection::vec(0.01f64..1.0, n),
            )
        })
    }

    proptest! {
        #[test]
        fn ordering_inequalities((s, rv) in pairs()) {
            let r = evaluate(&s, &rv).unwrap();
            prop_assert!(r.mae <= r.rmse * (1.0 + 1e-12));
            prop_assert!(r.mfe.abs() <= r.mae * (1.0 + 1e-12));
            prop_assert!(r.mape.unwrap() >= 0.0);
        }

        #[test]
        fn translation_invariance((s, rv) in pairs(), c in -1.0f64..1.0) {
            let a = evaluate(&s, &rv).unwrap();
            let s2: Vec<f64> = s.iter().map(|v| v + c).collect();
            let rv2: Vec<f64> = rv.iter().map(|v| v + c).collect();
            let b = evaluate(&s2, &rv2).unwrap();
            prop_assert!((a.mfe - b.mfe).abs() < 1e-12);
            prop_assert!((a.mae - b.mae).abs() < 1e-12);
            prop_assert!((a.rmse - b.rmse).abs() < 1e-12);
        }

        #[test]
        fn scaling((s, rv) in pairs(), c in 0.01f64..100.0) {
            let a = evaluate(&s, &rv).unwrap();
            let s2: Vec<f64> = s.iter().map(|v| v * c).collect();
            let rv2: Vec<f64> = rv.iter().map(|v| v * c).collect();
            let b = evaluate(&s2, &rv2).unwrap();
            let tol = 1e-12 * c.max(1.0);
            prop_assert!((b.mfe - c * a.mfe).abs() < tol);
            prop_assert!((b.mae - c * a.mae).abs() < tol);
            prop_assert!((b.rmse - c * a.rmse).abs() < tol);
            prop_assert!((b.mape.unwrap() - a.mape.unwrap()).abs() < 1e-9 * (1.0 + a.mape.unwrap()));
        }
    }
}
