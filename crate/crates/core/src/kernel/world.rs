use std::fmt;

use super::KernelError;

/// Largest supported vocabulary. Every checker enumerates all 2^n assignments.
pub const MAX_ATOMS: usize = 16;

/// A propositional atom, optionally stamped with a time (`p@3`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub name: String,
    pub timestamp: Option<u32>,
}

impl Atom {
    pub fn new(name: &str) -> Result<Self, KernelError> {
        if !is_identifier(name) {
            return Err(KernelError::InvalidAtomName(name.to_string()));
        }
        Ok(Atom { name: name.to_string(), timestamp: None })
    }

    pub fn stamped(name: &str, time: u32) -> Result<Self, KernelError> {
        let mut atom = Atom::new(name)?;
        atom.timestamp = Some(time);
        Ok(atom)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.timestamp {
            Some(t) => write!(f, "{}@{}", self.name, t),
            None => f.write_str(&self.name),
        }
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Ordered list of distinct atoms. The order fixes the bit layout of worlds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    atoms: Vec<Atom>,
}

impl Vocabulary {
    pub fn new(atoms: Vec<Atom>) -> Result<Self, KernelError> {
        if atoms.len() > MAX_ATOMS {
            return Err(KernelError::VocabularyTooLarge(atoms.len()));
        }
        for (i, a) in atoms.iter().enumerate() {
            if atoms[..i].contains(a) {
                return Err(KernelError::DuplicateAtom(a.to_string()));
            }
        }
        Ok(Vocabulary { atoms })
    }

    /// Builds a vocabulary from plain names; `p@2` style names get a timestamp.
    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self, KernelError> {
        let atoms = names
            .iter()
            .map(|n| parse_atom_name(n.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Vocabulary::new(atoms)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn atom(&self, i: usize) -> &Atom {
        &self.atoms[i]
    }

    pub fn index_of(&self, atom: &Atom) -> Option<usize> {
        self.atoms.iter().position(|a| a == atom)
    }

    /// All 2^n worlds in ascending order.
    pub fn all_worlds(&self) -> impl Iterator<Item = World> + '_ {
        let n = self.len() as u8;
        (0..(1u32 << n)).map(move |bits| World::new(bits, n))
    }
}

fn parse_atom_name(s: &str) -> Result<Atom, KernelError> {
    match s.split_once('@') {
        Some((name, t)) => {
            let t: u32 = t.parse().map_err(|_| KernelError::InvalidAtomName(s.to_string()))?;
            Atom::stamped(name, t)
        }
        None => Atom::new(s),
    }
}

/// A total truth assignment. Position i of the bitstring is atom i, so the
/// numeric value reads the bitstring as a binary number and ascending numeric
/// order is ascending bitstring order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct World {
    len: u8,
    bits: u32,
}

impl World {
    pub fn new(bits: u32, len: u8) -> Self {
        debug_assert!((len as usize) <= 32);
        let mask = if len >= 32 { u32::MAX } else { (1u32 << len) - 1 };
        World { len, bits: bits & mask }
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn len(self) -> usize {
        self.len as usize
    }

    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    /// Truth value of atom `i`.
    pub fn get(self, i: usize) -> bool {
        (self.bits >> (self.len as usize - 1 - i)) & 1 == 1
    }

    pub fn with(self, i: usize, value: bool) -> World {
        let bit = 1u32 << (self.len as usize - 1 - i);
        let bits = if value { self.bits | bit } else { self.bits & !bit };
        World { len: self.len, bits }
    }

    /// Number of atoms on which the two worlds differ.
    pub fn hamming(self, other: World) -> u32 {
        (self.bits ^ other.bits).count_ones()
    }

    pub fn parse_bits(s: &str) -> Result<World, KernelError> {
        if s.len() > 32 || !s.chars().all(|c| c == '0' || c == '1') {
            return Err(KernelError::BadWorld(s.to_string()));
        }
        let bits = if s.is_empty() { 0 } else { u32::from_str_radix(s, 2).unwrap() };
        Ok(World::new(bits, s.len() as u8))
    }
}

impl fmt::Display for World {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitstrings_follow_vocabulary_order() {
        let w = World::parse_bits("10").unwrap();
        assert!(w.get(0));
        assert!(!w.get(1));
        assert_eq!(w.to_string(), "10");
        assert_eq!(w.with(1, true).to_string(), "11");
    }

    #[test]
    fn ascending_numeric_order_is_ascending_bitstring_order() {
        let v = Vocabulary::from_names(&["p", "q"]).unwrap();
        let ws: Vec<String> = v.all_worlds().map(|w| w.to_string()).collect();
        assert_eq!(ws, ["00", "01", "10", "11"]);
    }

    #[test]
    fn vocabulary_rejects_bad_input() {
        assert!(Vocabulary::from_names(&["p", "p"]).is_err());
        assert!(Vocabulary::from_names(&["1p"]).is_err());
        let names: Vec<String> = (0..17).map(|i| format!("a{i}")).collect();
        assert!(matches!(Vocabulary::from_names(&names), Err(KernelError::VocabularyTooLarge(17))));
        let v = Vocabulary::from_names(&["p@3"]).unwrap();
        assert_eq!(v.atom(0).timestamp, Some(3));
        assert_eq!(v.atom(0).to_string(), "p@3");
    }
}
