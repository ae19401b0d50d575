//! Sign-vector combinatorics of the m-cube and the facet facts of the cyclic
//! neighborly cubical 4-polytope used by the graph construction.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeKind, Stage, TypedGraph, VertexLabel};

/// Smallest dimension for which the polytope graphs exist.
pub const MIN_DIMENSION: usize = 4;
/// Largest dimension supported by word-packed labels.
pub const MAX_DIMENSION: usize = 24;

pub(crate) fn check_dimension(m: usize, min: usize) -> Result<()> {
    if m < min || m > MAX_DIMENSION {
        return Err(Error::DimensionOutOfRange { m, min, max: MAX_DIMENSION });
    }
    Ok(())
}

/// A vertex of the m-cube, `{-,+}^m`, packed so that bit `i-1` holds
/// coordinate `i` (`-` is 0, `+` is 1).
///
/// Dimensions below [`MIN_DIMENSION`] are representable so that the
/// cube-connected cycles on three coordinates can be labeled too.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignVector {
    bits: u32,
    m: u8,
}

impl SignVector {
    pub fn new(bits: u32, m: usize) -> Result<Self> {
        check_dimension(m, 1)?;
        if m < 32 && bits >> m != 0 {
            return Err(Error::Precondition(format!(
                "bits {bits:#b} exceed dimension {m}"
            )));
        }
        Ok(Self { bits, m: m as u8 })
    }

    /// All `2^m` vertices in increasing bit order.
    pub fn all(m: usize) -> impl Iterator<Item = SignVector> {
        (0..1u32 << m).map(move |bits| SignVector { bits, m: m as u8 })
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn dimension(self) -> usize {
        self.m as usize
    }

    /// `true` if coordinate `d` is `+`.
    pub fn is_plus(self, d: Direction) -> bool {
        self.bits >> d.index() & 1 == 1
    }

    /// The neighbor across the direction-`d` edge, `v ⊕ e_d`.
    pub fn flip(self, d: Direction) -> SignVector {
        SignVector { bits: self.bits ^ (1 << d.index()), m: self.m }
    }

    /// Number of `+` coordinates.
    pub fn parity(self) -> u32 {
        self.bits.count_ones() & 1
    }

    /// `b<bits>` form, coordinate 1 first.
    pub fn to_bit_string(self) -> String {
        let mut s = String::with_capacity(self.m as usize + 1);
        s.push('b');
        for c in 0..self.m {
            s.push(if self.bits >> c & 1 == 1 { '1' } else { '0' });
        }
        s
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in 0..self.m {
            f.write_str(if self.bits >> c & 1 == 1 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl FromStr for SignVector {
    type Err = Error;

    /// Accepts `-`/`+` glyphs or the `b<bits>` form, coordinate 1 first.
    fn from_str(s: &str) -> Result<Self> {
        let (body, one, zero) = match s.strip_prefix('b') {
            Some(rest) => (rest, '1', '0'),
            None => (s, '+', '-'),
        };
        let mut bits = 0u32;
        let mut m = 0usize;
        for (c, ch) in body.chars().enumerate() {
            if c >= MAX_DIMENSION {
                return Err(Error::Parse(format!("sign vector `{s}` too long")));
            }
            if ch == one {
                bits |= 1 << c;
            } else if ch != zero {
                return Err(Error::Parse(format!("bad glyph `{ch}` in sign vector `{s}`")));
            }
            m = c + 1;
        }
        if m == 0 {
            return Err(Error::Parse("empty sign vector".into()));
        }
        SignVector::new(bits, m)
    }
}

/// A coordinate direction in `1..=m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Direction(u8);

impl Direction {
    pub fn new(value: usize, m: usize) -> Result<Self> {
        if value == 0 || value > m || m > MAX_DIMENSION {
            return Err(Error::DirectionOutOfRange { value, m });
        }
        Ok(Direction(value as u8))
    }

    pub(crate) fn from_index(index: usize) -> Self {
        Direction(index as u8 + 1)
    }

    pub fn all(m: usize) -> impl Iterator<Item = Direction> {
        (1..=m).map(|v| Direction(v as u8))
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }

    /// Zero-based coordinate index.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    /// Cyclic successor `i mod m + 1`.
    pub fn succ(self, m: usize) -> Direction {
        Direction((self.0 as usize % m + 1) as u8)
    }

    pub fn pred(self, m: usize) -> Direction {
        Direction(((self.0 as usize + m - 2) % m + 1) as u8)
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One coordinate of a face vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Glyph {
    Minus,
    Plus,
    Star,
}

/// A face of the cube complex, a word over `{-,+,*}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FaceVector {
    stars: u32,
    plus: u32,
    m: u8,
}

impl FaceVector {
    pub fn new(glyphs: &[Glyph]) -> Result<Self> {
        check_dimension(glyphs.len(), 1)?;
        let mut stars = 0;
        let mut plus = 0;
        for (c, g) in glyphs.iter().enumerate() {
            match g {
                Glyph::Star => stars |= 1 << c,
                Glyph::Plus => plus |= 1 << c,
                Glyph::Minus => {}
            }
        }
        Ok(Self { stars, plus, m: glyphs.len() as u8 })
    }

    /// Face with stars at `star_dirs` and all other coordinates `-`.
    pub fn with_stars(m: usize, star_dirs: &[Direction]) -> Result<Self> {
        check_dimension(m, 1)?;
        let mut stars = 0;
        for d in star_dirs {
            if d.get() > m {
                return Err(Error::DirectionOutOfRange { value: d.get(), m });
            }
            stars |= 1 << d.index();
        }
        Ok(Self { stars, plus: 0, m: m as u8 })
    }

    pub fn dimension(&self) -> usize {
        self.m as usize
    }

    pub fn glyph(&self, d: Direction) -> Glyph {
        if self.stars >> d.index() & 1 == 1 {
            Glyph::Star
        } else if self.plus >> d.index() & 1 == 1 {
            Glyph::Plus
        } else {
            Glyph::Minus
        }
    }

    pub fn star_count(&self) -> usize {
        self.stars.count_ones() as usize
    }

    /// Star positions in increasing order.
    pub fn star_directions(&self) -> Vec<Direction> {
        (0..self.m as usize)
            .filter(|c| self.stars >> c & 1 == 1)
            .map(Direction::from_index)
            .collect()
    }
}

impl fmt::Display for FaceVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in Direction::all(self.m as usize) {
            f.write_str(match self.glyph(d) {
                Glyph::Minus => "-",
                Glyph::Plus => "+",
                Glyph::Star => "*",
            })?;
        }
        Ok(())
    }
}

impl FromStr for FaceVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let glyphs = s
            .chars()
            .map(|ch| match ch {
                '-' => Ok(Glyph::Minus),
                '+' => Ok(Glyph::Plus),
                '*' => Ok(Glyph::Star),
                other => Err(Error::Parse(format!("bad glyph `{other}` in face `{s}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if glyphs.is_empty() {
            return Err(Error::Parse("empty face vector".into()));
        }
        FaceVector::new(&glyphs)
    }
}

/// Face counts `(f0, f1, f2, f3)` of a 4-polytope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FVector {
    pub f0: u64,
    pub f1: u64,
    pub f2: u64,
    pub f3: u64,
}

impl FVector {
    /// `f0 - f1 + f2 - f3 == 0`.
    pub fn satisfies_euler(&self) -> bool {
        self.f0 + self.f2 == self.f1 + self.f3
    }

    /// `f2 == 3 f3`, the double-counting relation for cubical 4-polytopes.
    pub fn satisfies_double_counting(&self) -> bool {
        self.f2 == 3 * self.f3
    }
}

/// Facet test for three-star vectors whose first coordinate is `*`: the
/// remaining two stars must be cyclically adjacent among coordinates `2..=m`.
///
/// Anything else (wrong star count, first coordinate a sign) is an error, not
/// `false`; the general criterion is not implemented.
pub fn is_first_star_facet(f: &FaceVector) -> Result<bool> {
    if f.star_count() != 3 {
        return Err(Error::Precondition(format!(
            "face {f} has {} stars, expected 3",
            f.star_count()
        )));
    }
    if f.glyph(Direction(1)) != Glyph::Star {
        return Err(Error::Precondition(format!("face {f} does not start with `*`")));
    }
    let m = f.dimension();
    let rest = f.star_directions();
    let (p, q) = (rest[1].get(), rest[2].get());
    Ok(q == p + 1 || (p == 2 && q == m))
}

/// A first-star facet whose free directions contain `i` and `j = succ(i)`,
/// certifying the 2-face spanned by the direction-`i` and direction-`j` edges
/// at every vertex. Non-star coordinates are `-`.
pub fn two_face_witness(m: usize, i: Direction, j: Direction) -> Result<FaceVector> {
    check_dimension(m, MIN_DIMENSION)?;
    if i.get() > m || j.get() > m {
        return Err(Error::DirectionOutOfRange { value: i.get().max(j.get()), m });
    }
    if j != i.succ(m) {
        return Err(Error::Precondition(format!("direction {j} is not succ({i}) mod {m}")));
    }
    let d = |v: usize| Direction(v as u8);
    let stars = if i.get() == m {
        [d(1), d(m - 1), d(m)]
    } else if i.get() == 1 {
        [d(1), d(2), d(3)]
    } else {
        [d(1), i, j]
    };
    FaceVector::with_stars(m, &stars)
}

/// `2^(m-2) * (4, 2m, 3m-6, m-2)`.
pub fn f_vector_ncc(m: usize) -> Result<FVector> {
    check_dimension(m, MIN_DIMENSION)?;
    let scale = 1u64 << (m - 2);
    let m = m as u64;
    Ok(FVector {
        f0: scale * 4,
        f1: scale * 2 * m,
        f2: scale * (3 * m - 6),
        f3: scale * (m - 2),
    })
}

/// The graph of the m-cube; every edge is a `Long` edge tagged with its direction.
pub fn build_hypercube(m: usize) -> Result<TypedGraph> {
    check_dimension(m, MIN_DIMENSION)?;
    cube_graph(m)
}

pub(crate) fn cube_graph(m: usize) -> Result<TypedGraph> {
    let labels: Vec<VertexLabel> = SignVector::all(m).map(VertexLabel::Cube).collect();
    let mut edges = Vec::with_capacity(m << (m - 1));
    for v in SignVector::all(m) {
        for d in Direction::all(m) {
            if !v.is_plus(d) {
                edges.push((v.bits() as usize, v.flip(d).bits() as usize, EdgeKind::Long));
            }
        }
    }
    TypedGraph::from_ids(Stage::Cube, m, labels, edges)
}
