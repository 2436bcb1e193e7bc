//! Nonempty subsets of the three file indices and demand vectors.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Index of a library file, 1..=3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FileId(u8);

impl FileId {
    pub const ALL: [FileId; 3] = [FileId(1), FileId(2), FileId(3)];

    pub fn new(i: u64) -> Result<Self> {
        match i {
            1..=3 => Ok(FileId(i as u8)),
            _ => Err(Error::FileIndex(i)),
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }

    /// The two other indices, ascending.
    pub fn others(self) -> [FileId; 2] {
        match self.0 {
            1 => [FileId(2), FileId(3)],
            2 => [FileId(1), FileId(3)],
            _ => [FileId(1), FileId(2)],
        }
    }
}

impl fmt::Display for FileId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A nonempty subset of {1,2,3}, stored as a bitmask.
///
/// Ordering follows the serialization order 123, 12, 13, 23, 1, 2, 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Subset(u8);

impl Subset {
    pub const S123: Subset = Subset(0b111);
    pub const S12: Subset = Subset(0b011);
    pub const S13: Subset = Subset(0b101);
    pub const S23: Subset = Subset(0b110);
    pub const S1: Subset = Subset(0b001);
    pub const S2: Subset = Subset(0b010);
    pub const S3: Subset = Subset(0b100);

    pub const CANONICAL: [Subset; 7] = [
        Self::S123,
        Self::S12,
        Self::S13,
        Self::S23,
        Self::S1,
        Self::S2,
        Self::S3,
    ];

    pub fn from_files(files: &[FileId]) -> Option<Self> {
        let mask = files.iter().fold(0u8, |m, f| m | (1 << (f.0 - 1)));
        (mask != 0).then_some(Subset(mask))
    }

    pub fn single(f: FileId) -> Self {
        Subset(1 << (f.0 - 1))
    }

    pub fn pair(a: FileId, b: FileId) -> Self {
        debug_assert_ne!(a, b);
        Subset((1 << (a.0 - 1)) | (1 << (b.0 - 1)))
    }

    pub fn contains(self, f: FileId) -> bool {
        self.0 & (1 << (f.0 - 1)) != 0
    }

    pub fn cardinality(self) -> u32 {
        self.0.count_ones()
    }

    /// Position in the canonical order.
    pub fn rank(self) -> usize {
        Self::CANONICAL
            .iter()
            .position(|s| *s == self)
            .expect("subset masks are always nonempty")
    }

    pub fn parse(s: &str) -> Option<Self> {
        let mut files = Vec::new();
        for c in s.chars() {
            let d = c.to_digit(10)? as u64;
            let f = FileId::new(d).ok()?;
            if files.contains(&f) {
                return None;
            }
            files.push(f);
        }
        Self::from_files(&files)
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..3u8 {
            if self.0 & (1 << i) != 0 {
                write!(f, "{}", i + 1)?;
            }
        }
        Ok(())
    }
}

/// The two receivers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Receiver {
    R1,
    R2,
}

impl Receiver {
    pub const BOTH: [Receiver; 2] = [Receiver::R1, Receiver::R2];

    pub fn index(self) -> usize {
        match self {
            Receiver::R1 => 0,
            Receiver::R2 => 1,
        }
    }
}

impl fmt::Display for Receiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Receiver::R1 => f.write_str("r1"),
            Receiver::R2 => f.write_str("r2"),
        }
    }
}

/// Files requested by (r1, r2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Demand {
    pub d1: FileId,
    pub d2: FileId,
}

impl Demand {
    pub fn new(d1: u64, d2: u64) -> Result<Self> {
        Ok(Demand {
            d1: FileId::new(d1)?,
            d2: FileId::new(d2)?,
        })
    }

    pub fn of(self, r: Receiver) -> FileId {
        match r {
            Receiver::R1 => self.d1,
            Receiver::R2 => self.d2,
        }
    }

    /// All nine demand vectors, lexicographic.
    pub fn all() -> impl Iterator<Item = Demand> {
        FileId::ALL
            .into_iter()
            .flat_map(|d1| FileId::ALL.into_iter().map(move |d2| Demand { d1, d2 }))
    }

    pub fn is_distinct(self) -> bool {
        self.d1 != self.d2
    }

    /// Parses `"d1,d2"`.
    pub fn parse(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("demand {s:?} is not of the form d1,d2")))?;
        let parse = |x: &str| {
            x.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("demand entry {x:?} is not an integer")))
        };
        Demand::new(parse(a)?, parse(b)?)
    }
}

impl fmt::Display for Demand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.d1, self.d2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_and_labels() {
        let labels: Vec<String> = Subset::CANONICAL.iter().map(|s| s.to_string()).collect();
        assert_eq!(labels, ["123", "12", "13", "23", "1", "2", "3"]);
        let mut shuffled = vec![Subset::S3, Subset::S12, Subset::S123, Subset::S1];
        shuffled.sort();
        assert_eq!(shuffled, [Subset::S123, Subset::S12, Subset::S1, Subset::S3]);
    }

    #[test]
    fn parse_subset() {
        assert_eq!(Subset::parse("13"), Some(Subset::S13));
        assert_eq!(Subset::parse("31"), Some(Subset::S13));
        assert_eq!(Subset::parse("11"), None);
        assert_eq!(Subset::parse("4"), None);
        assert_eq!(Subset::parse(""), None);
    }

    #[test]
    fn demands() {
        assert_eq!(Demand::all().count(), 9);
        assert_eq!(Demand::parse("1, 2").unwrap(), Demand::new(1, 2).unwrap());
        assert!(Demand::parse("0,2").is_err());
        assert!(Demand::parse("12").is_err());
    }
}
