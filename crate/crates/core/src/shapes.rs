//! Cell shapes: lines, combs and double-sided combs.
//!
//! Every shape is instantiated in one canonical orientation. The handle (or
//! the line itself) runs along +x starting at the root `(0, 0)`, teeth rise
//! along +y, and the down extensions of a double comb hang along -y. Snow
//! leaves the cell only across the edge between the root and `(-1, 0)`.

use crate::error::{Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt;

/// A unit grid square. Only 4-adjacency is ever used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Pixel {
    pub x: i32,
    pub y: i32,
}

impl Pixel {
    pub const fn new(x: i32, y: i32) -> Self {
        Self { x, y }
    }

    pub fn is_adjacent(self, other: Pixel) -> bool {
        (self.x - other.x).abs() + (self.y - other.y).abs() == 1
    }

    pub fn neighbours(self) -> [Pixel; 4] {
        [
            Pixel::new(self.x - 1, self.y),
            Pixel::new(self.x + 1, self.y),
            Pixel::new(self.x, self.y - 1),
            Pixel::new(self.x, self.y + 1),
        ]
    }
}

impl fmt::Display for Pixel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineDesc {
    #[serde(rename = "L")]
    pub len: u32,
}

/// Tooth lengths `T_0..T_{H-1}`, each counting the tooth's handle pixel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CombDesc {
    pub teeth: Vec<u32>,
}

/// Up teeth own the handle row; `down[i]` counts pixels strictly below it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DoubleCombDesc {
    pub up: Vec<u32>,
    pub down: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShapeDescriptor {
    Line(LineDesc),
    Comb(CombDesc),
    DoubleComb(DoubleCombDesc),
}

impl ShapeDescriptor {
    pub fn line(len: u32) -> Self {
        ShapeDescriptor::Line(LineDesc { len })
    }

    pub fn comb(teeth: impl Into<Vec<u32>>) -> Self {
        ShapeDescriptor::Comb(CombDesc {
            teeth: teeth.into(),
        })
    }

    pub fn double_comb(up: impl Into<Vec<u32>>, down: impl Into<Vec<u32>>) -> Self {
        ShapeDescriptor::DoubleComb(DoubleCombDesc {
            up: up.into(),
            down: down.into(),
        })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ShapeDescriptor::Line(line) => {
                if line.len == 0 {
                    return Err(Error::InvalidLength(0));
                }
            }
            ShapeDescriptor::Comb(comb) => validate_teeth(&comb.teeth)?,
            ShapeDescriptor::DoubleComb(double) => {
                validate_teeth(&double.up)?;
                if double.up.len() != double.down.len() {
                    return Err(Error::InvalidDescriptor(format!(
                        "double comb has {} up teeth but {} down extensions",
                        double.up.len(),
                        double.down.len()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Number of pixels in the cell.
    pub fn area(&self) -> u64 {
        match self {
            ShapeDescriptor::Line(line) => u64::from(line.len),
            ShapeDescriptor::Comb(comb) => comb.teeth.iter().map(|&t| u64::from(t)).sum(),
            ShapeDescriptor::DoubleComb(double) => double
                .up
                .iter()
                .chain(&double.down)
                .map(|&t| u64::from(t))
                .sum(),
        }
    }
}

impl fmt::Display for ShapeDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeDescriptor::Line(line) => write!(f, "line {}", line.len),
            ShapeDescriptor::Comb(comb) => write!(f, "comb {}", join(&comb.teeth)),
            ShapeDescriptor::DoubleComb(double) => {
                write!(f, "double {};{}", join(&double.up), join(&double.down))
            }
        }
    }
}

pub(crate) fn join(values: &[u32]) -> String {
    values
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn validate_teeth(teeth: &[u32]) -> Result<()> {
    if teeth.is_empty() {
        return Err(Error::InvalidDescriptor(
            "comb needs at least one tooth".into(),
        ));
    }
    if let Some(i) = teeth.iter().position(|&t| t == 0) {
        return Err(Error::InvalidDescriptor(format!(
            "tooth {i} has length 0; every handle pixel hosts a tooth"
        )));
    }
    Ok(())
}

pub fn validate_cap(cap: u32) -> Result<()> {
    if cap < 2 {
        Err(Error::InvalidCap(cap))
    } else {
        Ok(())
    }
}

/// An instance document: depth cap plus shape.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    #[serde(rename = "D")]
    pub cap: u32,
    pub shape: ShapeDescriptor,
}

impl Instance {
    pub fn new(shape: ShapeDescriptor, cap: u32) -> Result<Self> {
        let instance = Instance { cap, shape };
        instance.validate()?;
        Ok(instance)
    }

    pub fn validate(&self) -> Result<()> {
        validate_cap(self.cap)?;
        self.shape.validate()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let instance: Instance =
            serde_json::from_str(text).map_err(|e| Error::InvalidDescriptor(e.to_string()))?;
        instance.validate()?;
        Ok(instance)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serialization is infallible")
    }
}

/// Remainder/quotient split of a length against the cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rq {
    pub r: u32,
    pub q: u32,
}

/// `L = R + Q*D` with `0 <= R < D`.
pub fn line_rq(len: u32, cap: u32) -> Result<Rq> {
    validate_cap(cap)?;
    if len == 0 {
        return Err(Error::InvalidLength(len));
    }
    Ok(Rq {
        r: len % cap,
        q: len / cap,
    })
}

/// `T = R + Q*D` with `1 <= R <= D`: a divisible tooth keeps a full `D`
/// as its remainder.
pub fn tooth_rq(len: u32, cap: u32) -> Result<Rq> {
    validate_cap(cap)?;
    if len == 0 {
        return Err(Error::InvalidLength(len));
    }
    let r = match len % cap {
        0 => cap,
        r => r,
    };
    Ok(Rq {
        r,
        q: (len - r) / cap,
    })
}

/// Canonical pixel layout of a shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Geometry {
    pub pixels: Vec<Pixel>,
    pub root: Pixel,
    /// Outside end of the ejection edge.
    pub eject_to: Pixel,
}

pub const ROOT: Pixel = Pixel::new(0, 0);
pub const EJECT_TO: Pixel = Pixel::new(-1, 0);

pub fn pixels_of(desc: &ShapeDescriptor) -> Result<Geometry> {
    desc.validate()?;
    let mut pixels = Vec::new();
    match desc {
        ShapeDescriptor::Line(line) => {
            pixels.extend((0..line.len as i32).map(|x| Pixel::new(x, 0)));
        }
        ShapeDescriptor::Comb(comb) => push_teeth(&mut pixels, &comb.teeth),
        ShapeDescriptor::DoubleComb(double) => {
            push_teeth(&mut pixels, &double.up);
            for (i, &down) in double.down.iter().enumerate() {
                pixels.extend((1..=down as i32).map(|y| Pixel::new(i as i32, -y)));
            }
        }
    }
    Ok(Geometry {
        pixels,
        root: ROOT,
        eject_to: EJECT_TO,
    })
}

fn push_teeth(pixels: &mut Vec<Pixel>, teeth: &[u32]) {
    for (i, &t) in teeth.iter().enumerate() {
        pixels.extend((0..t as i32).map(|y| Pixel::new(i as i32, y)));
    }
}

/// Comb with handle length uniform in `[1, h_max]` and tooth lengths uniform
/// in `[1, t_max]`.
pub fn random_comb<R: Rng + ?Sized>(rng: &mut R, h_max: u32, t_max: u32) -> CombDesc {
    let h = rng.gen_range(1..=h_max.max(1));
    CombDesc {
        teeth: (0..h).map(|_| rng.gen_range(1..=t_max.max(1))).collect(),
    }
}
