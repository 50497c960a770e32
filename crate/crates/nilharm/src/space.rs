//! The two variable spaces every symbolic object is tagged with.

use std::fmt;

/// Maximum number of coordinates across both spaces; exponent vectors are
/// fixed-width with unused trailing slots kept at zero.
pub const MAX_VARS: usize = 6;

/// Which group a polynomial or operator lives on.
///
/// `N` has coordinates `(x1, x2, x3, y1, y2, y3)`; the quotient `NPrime` has
/// `(x1, x2, x3, t)`.  Mixing spaces in an arithmetic operation is an error,
/// not a coercion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Space {
    N,
    NPrime,
}

impl Space {
    pub fn dim(self) -> usize {
        match self {
            Space::N => 6,
            Space::NPrime => 4,
        }
    }

    /// Printable name of coordinate `i`; panics if `i` is out of range.
    pub fn var_name(self, i: usize) -> &'static str {
        const N_VARS: [&str; 6] = ["x1", "x2", "x3", "y1", "y2", "y3"];
        const NPRIME_VARS: [&str; 4] = ["x1", "x2", "x3", "t"];
        match self {
            Space::N => N_VARS[i],
            Space::NPrime => NPRIME_VARS[i],
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::N => write!(f, "N"),
            Space::NPrime => write!(f, "N'"),
        }
    }
}
