use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use super::PatternError;
use crate::space::Coord2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pentomino {
    F,
    I,
    L,
    N,
    P,
    T,
    U,
    V,
    W,
    X,
    Y,
    Z,
}

impl Pentomino {
    pub const ALL: [Pentomino; 12] = [
        Self::F,
        Self::I,
        Self::L,
        Self::N,
        Self::P,
        Self::T,
        Self::U,
        Self::V,
        Self::W,
        Self::X,
        Self::Y,
        Self::Z,
    ];

    // Row `r` of the picture is y = r.
    fn picture(self) -> &'static [&'static str] {
        match self {
            Self::F => &[".##", "##.", ".#."],
            Self::I => &["#####"],
            Self::L => &["#.", "#.", "#.", "##"],
            Self::N => &[".#", ".#", "##", "#."],
            Self::P => &["##", "##", "#."],
            Self::T => &["###", ".#.", ".#."],
            Self::U => &["#.#", "###"],
            Self::V => &["#..", "#..", "###"],
            Self::W => &["#..", "##.", ".##"],
            Self::X => &[".#.", "###", ".#."],
            Self::Y => &[".#", "##", ".#", ".#"],
            Self::Z => &["##.", ".#.", ".##"],
        }
    }

    /// The five cells, with the minimum corner at the origin.
    pub fn cells(self) -> BTreeSet<Coord2> {
        self.picture()
            .iter()
            .enumerate()
            .flat_map(|(y, row)| {
                row.bytes().enumerate().filter(|&(_, b)| b == b'#').map(move |(x, _)| Coord2::new(x as i64, y as i64))
            })
            .collect()
    }
}

impl FromStr for Pentomino {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|p| p.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| PatternError::UnknownPentomino(s.to_owned()))
    }
}

impl fmt::Display for Pentomino {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
