//! Label ids as big-endian analog bits: 0 maps to -1, 1 to +1.

use super::Matrix;
use crate::error::{Error, Result};

/// Bits needed for `label_count` labels, at least one.
pub fn bit_width(label_count: usize) -> usize {
    let mut m = 0;
    while (1usize << m) < label_count {
        m += 1;
    }
    m.max(1)
}

fn check_id(id: usize, label_count: usize) -> Result<()> {
    if id >= label_count {
        return Err(Error::InvalidArgument(format!(
            "label id {id} outside [0, {label_count})"
        )));
    }
    Ok(())
}

pub fn tag2bit(ids: &[usize], label_count: usize) -> Result<Matrix> {
    let m = bit_width(label_count);
    for &id in ids {
        check_id(id, label_count)?;
    }
    Ok(Matrix::from_fn(ids.len(), m, |r, c| {
        if (ids[r] >> (m - 1 - c)) & 1 == 1 {
            1.0
        } else {
            -1.0
        }
    }))
}

/// Thresholds at zero and reassembles ids; codes at or beyond `label_count`
/// become `fallback`.
pub fn bit2tag(signal: &Matrix, label_count: usize, fallback: usize) -> Result<Vec<usize>> {
    let m = bit_width(label_count);
    check_id(fallback, label_count)?;
    if signal.cols() != m {
        return Err(Error::Shape {
            left: signal.shape(),
            right: (signal.rows(), m),
        });
    }
    Ok((0..signal.rows())
        .map(|r| {
            let id = signal
                .row(r)
                .iter()
                .fold(0, |acc, &v| (acc << 1) | usize::from(v > 0.0));
            if id < label_count {
                id
            } else {
                fallback
            }
        })
        .collect())
}
