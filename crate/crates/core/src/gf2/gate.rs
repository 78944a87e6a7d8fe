use std::fmt;

use crate::error::{Error, Result};

/// End of the remainder function a gate is peeled from.
///
/// Output-side gates are row operations on the remainder matrix, input-side
/// gates are column operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Output,
    Input,
}

/// A CNOT in a finished circuit: XOR line `control` onto line `target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cnot {
    pub control: usize,
    pub target: usize,
}

impl Cnot {
    pub fn new(control: usize, target: usize) -> Self {
        Self { control, target }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.control == self.target || self.control >= n || self.target >= n {
            return Err(Error::InvalidGate {
                control: self.control,
                target: self.target,
                n,
            });
        }
        Ok(())
    }

    #[inline]
    pub fn touches(&self, line: usize) -> bool {
        self.control == line || self.target == line
    }

    /// Two CNOTs commute unless one's target is the other's control.
    #[inline]
    pub fn commutes_with(&self, other: &Cnot) -> bool {
        self.control != other.target && self.target != other.control
    }
}

impl fmt::Display for Cnot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cnot {} {}", self.control, self.target)
    }
}

/// A CNOT tagged with the side of the remainder it was synthesized from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CnotGate {
    pub control: usize,
    pub target: usize,
    pub side: Side,
}

impl CnotGate {
    pub fn new(control: usize, target: usize, side: Side) -> Self {
        Self {
            control,
            target,
            side,
        }
    }

    pub fn output(control: usize, target: usize) -> Self {
        Self::new(control, target, Side::Output)
    }

    pub fn input(control: usize, target: usize) -> Self {
        Self::new(control, target, Side::Input)
    }

    pub fn cnot(&self) -> Cnot {
        Cnot::new(self.control, self.target)
    }

    #[inline]
    pub fn touches(&self, line: usize) -> bool {
        self.control == line || self.target == line
    }

    /// Whether applying `self` and `other` in either order gives the same remainder.
    ///
    /// Row and column operations always commute with each other.
    #[inline]
    pub fn commutes_with(&self, other: &CnotGate) -> bool {
        self.side != other.side || self.cnot().commutes_with(&other.cnot())
    }
}

/// Appends `g` to `gates` unless it cancels against an earlier copy of itself.
///
/// Walks back from the end of the list. If an identical gate is reached before
/// any gate sharing a line with `g`, that gate is removed and `true` returned.
pub fn cancel_redundant(gates: &mut Vec<CnotGate>, g: CnotGate) -> bool {
    for idx in (0..gates.len()).rev() {
        let other = gates[idx];
        if other == g {
            gates.remove(idx);
            return true;
        }
        if other.touches(g.control) || other.touches(g.target) {
            break;
        }
    }
    gates.push(g);
    false
}

/// Every ordered (control, target) pair on both sides: output side first, then
/// input side; within a side, target ascending, then control ascending.
pub fn enumerate_gates(n: usize) -> Vec<CnotGate> {
    let mut out = Vec::with_capacity(2 * n * n.saturating_sub(1));
    for side in [Side::Output, Side::Input] {
        for t in 0..n {
            for c in 0..n {
                if c != t {
                    out.push(CnotGate::new(c, t, side));
                }
            }
        }
    }
    out
}
