use std::fmt;

use serde::{Deserialize, Serialize};

/// One asymptotic scattering state: arrangement label plus (v, j, m).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChannelState {
    pub arrangement: String,
    pub v: u32,
    pub j: u32,
    pub m: i32,
}

impl ChannelState {
    pub fn new(arrangement: impl Into<String>, v: u32, j: u32, m: i32) -> Self {
        Self {
            arrangement: arrangement.into(),
            v,
            j,
            m,
        }
    }

    /// Returns a description of the first broken invariant, if any.
    pub fn check(&self) -> Option<String> {
        if self.arrangement.trim().is_empty() {
            return Some("empty arrangement label".to_string());
        }
        if self.m.unsigned_abs() > self.j {
            return Some(format!(
                "|m| = {} exceeds j = {}",
                self.m.unsigned_abs(),
                self.j
            ));
        }
        None
    }
}

impl fmt::Display for ChannelState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}(v={}, j={}, m={})",
            self.arrangement, self.v, self.j, self.m
        )
    }
}
