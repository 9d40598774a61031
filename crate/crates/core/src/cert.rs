use core::fmt;

use crate::group::Window;

/// Three-valued verdict attached to every claim.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Proven,
    Refuted,
    /// Supported inside `ball(window)` at multiplicity threshold `threshold`.
    Evidence {
        window: Window,
        threshold: u64,
    },
}

impl Verdict {
    pub fn is_exact(self) -> bool {
        !matches!(self, Verdict::Evidence { .. })
    }

    pub fn evidence(window: Window, threshold: u64) -> Verdict {
        Verdict::Evidence { window, threshold }
    }

    /// Weakest of two verdicts: any evidence makes the conjunction evidence.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Refuted, _) | (_, Verdict::Refuted) => Verdict::Refuted,
            (e @ Verdict::Evidence { .. }, _) | (_, e @ Verdict::Evidence { .. }) => e,
            _ => Verdict::Proven,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Proven => f.write_str("proven"),
            Verdict::Refuted => f.write_str("refuted"),
            Verdict::Evidence { window, threshold } => {
                write!(f, "evidence(W={window}, t={threshold})")
            }
        }
    }
}
