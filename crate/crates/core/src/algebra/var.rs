//! Interned jet variables.
//!
//! A [`Var`] is a pair `(name, order)`; `order` counts primes, so `b''` is
//! `("b", 2)`. The same type is used for state variables (always order 0)
//! and for the reserved independent variable `t`.

use std::collections::HashSet;
use std::fmt;
use std::sync::{Mutex, OnceLock};

fn interner() -> &'static Mutex<HashSet<&'static str>> {
    static NAMES: OnceLock<Mutex<HashSet<&'static str>>> = OnceLock::new();
    NAMES.get_or_init(|| Mutex::new(HashSet::new()))
}

fn intern(name: &str) -> &'static str {
    let mut set = interner().lock().expect("symbol interner poisoned");
    if let Some(s) = set.get(name) {
        return s;
    }
    let leaked: &'static str = Box::leak(name.to_owned().into_boxed_str());
    set.insert(leaked);
    leaked
}

/// Name of the independent variable. Its derivative is 1.
pub const TIME: &str = "t";

/// A jet variable: a named symbol together with its derivative order.
///
/// Ordering is lexicographic by name, then by order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    name: &'static str,
    order: u32,
}

impl Var {
    pub fn new(name: &str) -> Self {
        Var { name: intern(name), order: 0 }
    }

    pub fn jet(name: &str, order: u32) -> Self {
        Var { name: intern(name), order }
    }

    pub fn time() -> Self {
        Var::new(TIME)
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_time(&self) -> bool {
        self.name == TIME
    }

    /// The next jet, `(name, order + 1)`.
    pub fn prime(&self) -> Self {
        Var { name: self.name, order: self.order + 1 }
    }

    pub fn with_order(&self, order: u32) -> Self {
        Var { name: self.name, order }
    }

    /// The order-0 symbol this jet belongs to.
    pub fn base(&self) -> Self {
        self.with_order(0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name)?;
        for _ in 0..self.order {
            f.write_str("'")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_is_name_then_order() {
        let a = Var::new("a");
        let b = Var::new("b");
        assert!(a < b);
        assert!(a.prime() < b);
        assert!(b < b.prime());
        assert_eq!(Var::jet("b", 2), b.prime().prime());
        assert_eq!(b.prime().prime().to_string(), "b''");
    }
}
