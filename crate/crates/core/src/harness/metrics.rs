use crate::error::{Error, Result};

/// Unweighted mean of per-class recalls over classes `0..n_classes`.
pub fn balanced_accuracy(truth: &[usize], predicted: &[usize], n_classes: usize) -> Result<f64> {
    if truth.len() != predicted.len() {
        return Err(Error::LengthMismatch {
            expected: truth.len(),
            actual: predicted.len(),
        });
    }
    let mut support = vec![0usize; n_classes];
    let mut hits = vec![0usize; n_classes];
    for (&t, &p) in truth.iter().zip(predicted) {
        if t >= n_classes {
            return Err(Error::IndexOutOfRange {
                index: t,
                len: n_classes,
            });
        }
        support[t] += 1;
        if t == p {
            hits[t] += 1;
        }
    }
    if let Some(k) = support.iter().position(|&s| s == 0) {
        return Err(Error::InvalidParameter(format!(
            "class {k} does not occur in the truth"
        )));
    }
    let total: f64 = hits
        .iter()
        .zip(&support)
        .map(|(&h, &s)| h as f64 / s as f64)
        .sum();
    Ok(total / n_classes as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        // recalls 0.8 and 0.6
        let truth = [0, 0, 0, 0, 0, 1, 1, 1, 1, 1];
        let pred = [0, 0, 0, 0, 1, 1, 1, 1, 0, 0];
        assert!((balanced_accuracy(&truth, &pred, 2).unwrap() - 0.7).abs() < 1e-15);
        assert_eq!(balanced_accuracy(&truth, &truth, 2).unwrap(), 1.0);
        let three = [0, 1, 2, 2, 1];
        let constant = [1; 5];
        assert!((balanced_accuracy(&three, &constant, 3).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(balanced_accuracy(&[0, 0], &[0, 0], 2).is_err());
        assert!(balanced_accuracy(&[0], &[0, 1], 2).is_err());
    }
}
