//! Vertex addresses in a tree stack.

use std::fmt;

/// A vertex address: a finite sequence of positive integers, the empty
/// sequence being the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Address(Vec<u32>);

impl Address {
    /// The root address.
    pub fn root() -> Address {
        Address(Vec::new())
    }

    /// Builds an address from its digits.
    ///
    /// # Panics
    ///
    /// Panics if a digit is zero.
    pub fn new(digits: impl Into<Vec<u32>>) -> Address {
        let digits = digits.into();
        assert!(digits.iter().all(|&d| d >= 1), "address digits must be positive");
        Address(digits)
    }

    pub fn digits(&self) -> &[u32] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    /// The parent address, or `None` at the root.
    pub fn parent(&self) -> Option<Address> {
        let (_, init) = self.0.split_last()?;
        Some(Address(init.to_vec()))
    }

    /// The last digit, or `None` at the root.
    pub fn last(&self) -> Option<u32> {
        self.0.last().copied()
    }

    /// The child address `self n`.
    pub fn child(&self, n: u32) -> Address {
        assert!(n >= 1, "child index must be positive");
        let mut digits = self.0.clone();
        digits.push(n);
        Address(digits)
    }

    /// Prepends a digit: `n self`.
    pub fn prepend(&self, n: u32) -> Address {
        let mut digits = Vec::with_capacity(self.0.len() + 1);
        digits.push(n);
        digits.extend_from_slice(&self.0);
        Address::new(digits)
    }

    /// Strips a leading digit `n`, if present.
    pub fn strip_first(&self, n: u32) -> Option<Address> {
        match self.0.split_first() {
            Some((&d, rest)) if d == n => Some(Address(rest.to_vec())),
            _ => None,
        }
    }
}

/// Dotted digits, `.` for the root.
impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str(".");
        }
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Address {
    type Err = String;

    fn from_str(s: &str) -> Result<Address, String> {
        if s == "." || s.is_empty() {
            return Ok(Address::root());
        }
        let digits = s
            .split('.')
            .map(|d| match d.parse::<u32>() {
                Ok(n) if n >= 1 => Ok(n),
                _ => Err(format!("bad address digit `{d}`")),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Address(digits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_roundtrip() {
        for a in [Address::root(), Address::new([1]), Address::new([1, 4, 12])] {
            let s = a.to_string();
            assert_eq!(s.parse::<Address>().unwrap(), a);
        }
        assert_eq!(Address::new([1, 4]).to_string(), "1.4");
    }

    #[test]
    fn parent_and_child() {
        let a = Address::new([2, 1]);
        assert_eq!(a.parent(), Some(Address::new([2])));
        assert_eq!(Address::root().parent(), None);
        assert_eq!(Address::new([2]).child(1), a);
        assert_eq!(a.prepend(1), Address::new([1, 2, 1]));
        assert_eq!(Address::new([1, 2, 1]).strip_first(1), Some(a));
    }
}
