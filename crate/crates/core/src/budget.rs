//! Resource limits shared by every exhaustive operation.

use crate::error::{GrmError, Result};

/// Caps on table size and on the number of elementary steps an operation may
/// take. Operations estimate their cost up front and refuse to start when the
/// estimate is above the cap, so exhaustion is deterministic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Largest evaluation table (number of points) that may be materialized.
    pub max_points: u64,
    /// Largest number of elementary steps (table-entry touches).
    pub max_ops: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_points: 1 << 24,
            max_ops: 1 << 36,
        }
    }
}

impl Budget {
    pub fn with_ops(max_ops: u64) -> Self {
        Budget {
            max_ops,
            ..Budget::default()
        }
    }

    pub fn unlimited() -> Self {
        Budget {
            max_points: u64::MAX,
            max_ops: u64::MAX,
        }
    }

    pub fn check_points(&self, what: &str, points: Option<u64>) -> Result<u64> {
        match points {
            Some(n) if n <= self.max_points => Ok(n),
            Some(n) => Err(GrmError::BudgetExceeded {
                what: what.to_string(),
                required: n.to_string(),
                limit: self.max_points,
            }),
            None => Err(GrmError::BudgetExceeded {
                what: what.to_string(),
                required: "overflow".to_string(),
                limit: self.max_points,
            }),
        }
    }

    pub fn check_ops(&self, what: &str, ops: Option<u64>) -> Result<u64> {
        match ops {
            Some(n) if n <= self.max_ops => Ok(n),
            Some(n) => Err(GrmError::BudgetExceeded {
                what: what.to_string(),
                required: n.to_string(),
                limit: self.max_ops,
            }),
            None => Err(GrmError::BudgetExceeded {
                what: what.to_string(),
                required: "overflow".to_string(),
                limit: self.max_ops,
            }),
        }
    }
}

/// `base^exp` as u64, `None` on overflow.
pub fn checked_pow(base: u64, exp: usize) -> Option<u64> {
    let exp = u32::try_from(exp).ok()?;
    base.checked_pow(exp)
}
