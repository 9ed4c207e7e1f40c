//! Deterministic instance generators. Every family returns normalized boxes.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{coord, normalize, AxisBox, Coord, Interval};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    UniformRandom,
    NestedChain,
    GridDisjoint,
    BurlingLike,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::UniformRandom,
        Family::NestedChain,
        Family::GridDisjoint,
        Family::BurlingLike,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::UniformRandom => "uniform-random",
            Family::NestedChain => "nested-chain",
            Family::GridDisjoint => "grid-disjoint",
            Family::BurlingLike => "burling-like",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown family {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenParams {
    /// uniform-random: endpoints are drawn from `0..range`.
    pub range: u64,
    /// uniform-random: cap on side length (at least 1).
    pub max_side: Option<u64>,
    /// burling-like: recursion level; defaults to the largest level with at
    /// most `n` boxes.
    pub level: Option<usize>,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            range: 100,
            max_side: None,
            level: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    pub family: Family,
    pub params: GenParams,
}

/// Size guard for the recursive family.
pub const BURLING_MAX_BOXES: usize = 5000;

pub fn generate(spec: &GenSpec) -> Result<Vec<AxisBox>> {
    if spec.d == 0 {
        return Err(Error::InvalidSpec("dimension must be at least 1".into()));
    }
    if spec.n == 0 && spec.family != Family::BurlingLike {
        return Err(Error::InvalidSpec("need at least one box".into()));
    }
    let raw = match spec.family {
        Family::UniformRandom => uniform_random(spec)?,
        Family::NestedChain => nested_chain(spec.n, spec.d),
        Family::GridDisjoint => grid_disjoint(spec.n, spec.d),
        Family::BurlingLike => {
            if spec.d != 3 {
                return Err(Error::InvalidSpec("burling-like boxes live in dimension 3".into()));
            }
            let level = match spec.params.level {
                Some(0) => return Err(Error::InvalidSpec("level must be at least 1".into())),
                Some(l) => l,
                None => (1..)
                    .take_while(|&l| burling_size(l).is_some_and(|s| s <= spec.n.max(1)))
                    .last()
                    .unwrap_or(1),
            };
            burling_like(level)?
        }
    };
    normalize(&raw)
}

fn uniform_random(spec: &GenSpec) -> Result<Vec<AxisBox>> {
    let range = spec.params.range;
    if range < 2 {
        return Err(Error::InvalidSpec("range must be at least 2".into()));
    }
    let max_side = spec.params.max_side.unwrap_or(range - 1);
    if max_side == 0 {
        return Err(Error::InvalidSpec("max_side must be at least 1".into()));
    }
    let max_side = max_side.min(range - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    Ok((0..spec.n)
        .map(|id| {
            let sides = (0..spec.d)
                .map(|_| {
                    let len = rng.gen_range(1..=max_side);
                    let lo = rng.gen_range(0..range - len);
                    Interval::from_ints(lo as i64, (lo + len) as i64)
                })
                .collect();
            AxisBox::new(id, sides)
        })
        .collect())
}

fn nested_chain(n: usize, d: usize) -> Vec<AxisBox> {
    let top = 2 * n as i64 - 1;
    (0..n)
        .map(|i| AxisBox::from_ints(i, &vec![(i as i64, top - i as i64); d]))
        .collect()
}

fn grid_disjoint(n: usize, d: usize) -> Vec<AxisBox> {
    let mut side = 1usize;
    while side.checked_pow(d as u32).is_some_and(|p| p < n) {
        side += 1;
    }
    (0..n)
        .map(|i| {
            let mut rest = i;
            let sides: Vec<(i64, i64)> = (0..d)
                .map(|_| {
                    let c = (rest % side) as i64;
                    rest /= side;
                    (2 * c, 2 * c + 1)
                })
                .collect();
            AxisBox::from_ints(i, &sides)
        })
        .collect()
}

// ---- recursive triangle-free family in R^3 ---------------------------------
//
// A level is a set of boxes in [0,1]^3 together with probes. A probe is a
// column [0,1] x Y x Z; every box meeting it covers Y x Z, those boxes are
// pairwise disjoint, and no box meets the x-range `gap` of the column.
// Probes have pairwise disjoint Y x Z.
//
// The next level keeps the old boxes and, inside the gap of each probe P,
// places a scaled copy of the whole level. For every probe Q of that copy a
// connector box spans the copy in x over the middle fifth of Q's Y: it meets
// exactly the boxes Q sees, which are independent, so no triangle appears.
// The first and last fifths of Q's Y become new probes, seeing P's boxes and
// Q's boxes at once.

#[derive(Clone)]
struct Probe {
    y: (Coord, Coord),
    z: (Coord, Coord),
    gap: (Coord, Coord),
}

struct Level {
    boxes: Vec<[(Coord, Coord); 3]>,
    probes: Vec<Probe>,
}

fn frac(p: i64, q: i64) -> Coord {
    Coord::new(p.into(), q.into())
}

fn lerp(range: &(Coord, Coord), t: &Coord) -> Coord {
    &range.0 + (&range.1 - &range.0) * t
}

fn sub_range(range: &(Coord, Coord), a: &Coord, b: &Coord) -> (Coord, Coord) {
    (lerp(range, a), lerp(range, b))
}

/// Box count of each level, or `None` past the size guard.
pub fn burling_size(level: usize) -> Option<usize> {
    let (mut size, mut probes) = (1usize, 1usize);
    for _ in 1..level {
        size = size.checked_add(probes.checked_mul(size.checked_add(probes)?)?)?;
        probes = probes.checked_mul(probes)?.checked_mul(2)?;
        if size > BURLING_MAX_BOXES {
            return None;
        }
    }
    (level >= 1).then_some(size)
}

fn burling_like(level: usize) -> Result<Vec<AxisBox>> {
    if burling_size(level).is_none() {
        return Err(Error::InvalidSpec(format!(
            "burling-like level {level} exceeds {BURLING_MAX_BOXES} boxes"
        )));
    }
    let unit = (coord(0), coord(1));
    let mut cur = Level {
        boxes: vec![[(frac(1, 8), frac(2, 8)), unit.clone(), unit.clone()]],
        probes: vec![Probe {
            y: (frac(1, 8), frac(7, 8)),
            z: (frac(1, 8), frac(7, 8)),
            gap: (frac(3, 8), frac(7, 8)),
        }],
    };
    for _ in 1..level {
        cur = next_level(&cur);
    }
    Ok(cur
        .boxes
        .into_iter()
        .enumerate()
        .map(|(id, [x, y, z])| {
            AxisBox::new(
                id,
                [x, y, z]
                    .into_iter()
                    .map(|(lo, hi)| Interval::new(lo, hi).expect("lo < hi by construction"))
                    .collect(),
            )
        })
        .collect())
}

fn next_level(cur: &Level) -> Level {
    let mut boxes = cur.boxes.clone();
    let mut probes = Vec::new();
    let fifth = |i: i64| frac(i, 5);
    for p in &cur.probes {
        let w = &p.gap.1 - &p.gap.0;
        let copy_x = (&p.gap.0 + &w * frac(1, 4), &p.gap.0 + &w * frac(3, 4));
        let place = |b: &[(Coord, Coord); 3]| -> [(Coord, Coord); 3] {
            [
                sub_range(&copy_x, &b[0].0, &b[0].1),
                sub_range(&p.y, &b[1].0, &b[1].1),
                sub_range(&p.z, &b[2].0, &b[2].1),
            ]
        };
        boxes.extend(cur.boxes.iter().map(place));
        let connector_x = (&p.gap.0 + &w * frac(1, 8), &p.gap.0 + &w * frac(7, 8));
        for q in &cur.probes {
            let qy = sub_range(&p.y, &q.y.0, &q.y.1);
            let qz = sub_range(&p.z, &q.z.0, &q.z.1);
            let qgap = sub_range(&copy_x, &q.gap.0, &q.gap.1);
            boxes.push([
                connector_x.clone(),
                sub_range(&qy, &fifth(2), &fifth(3)),
                qz.clone(),
            ]);
            for (a, b) in [(0, 1), (4, 5)] {
                probes.push(Probe {
                    y: sub_range(&qy, &fifth(a), &fifth(b)),
                    z: qz.clone(),
                    gap: qgap.clone(),
                });
            }
        }
    }
    Level { boxes, probes }
}
