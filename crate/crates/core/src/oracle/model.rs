// Finite Kripke countermodels for RC⁰ sequents.

use serde::{Deserialize, Serialize};

use crate::formula::{flatten, Level, RcFormula};

/// A finite frame with one accessibility relation per level, plus the world
/// at which the refuted sequent is evaluated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterModel {
    pub worlds: usize,
    /// `relations[n]` holds the pairs of `R_n`.
    pub relations: Vec<Vec<(usize, usize)>>,
    pub witness: usize,
}

/// Why a model fails its invariant checker.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FrameViolation {
    WorldOutOfRange(usize),
    NotTransitive { level: Level, x: usize, y: usize, z: usize },
    NotIncluded { upper: Level, lower: Level, x: usize, y: usize },
    NotPacked { n: Level, m: Level, x: usize, y: usize, z: usize },
}

impl CounterModel {
    fn related(&self, n: Level, x: usize, y: usize) -> bool {
        self.relations.get(n as usize).is_some_and(|r| r.contains(&(x, y)))
    }

    fn successors(&self, n: Level, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.relations
            .get(n as usize)
            .into_iter()
            .flatten()
            .filter(move |(a, _)| *a == x)
            .map(|(_, b)| *b)
    }

    /// Transitivity, downward inclusion and the packing condition
    /// `x R_n y ∧ x R_m z ⟹ y R_m z` for `m < n`.
    pub fn check_frame(&self) -> Result<(), FrameViolation> {
        if self.witness >= self.worlds {
            return Err(FrameViolation::WorldOutOfRange(self.witness));
        }
        for rel in &self.relations {
            for &(x, y) in rel {
                if x >= self.worlds || y >= self.worlds {
                    return Err(FrameViolation::WorldOutOfRange(x.max(y)));
                }
            }
        }
        for (n, rel) in self.relations.iter().enumerate() {
            let n = n as Level;
            for &(x, y) in rel {
                for z in self.successors(n, y) {
                    if !self.related(n, x, z) {
                        return Err(FrameViolation::NotTransitive { level: n, x, y, z });
                    }
                }
                for m in 0..n {
                    if !self.related(m, x, y) {
                        return Err(FrameViolation::NotIncluded { upper: n, lower: m, x, y });
                    }
                    for z in self.successors(m, x) {
                        if !self.related(m, y, z) {
                            return Err(FrameViolation::NotPacked { n, m, x, y, z });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn satisfies(&self, world: usize, f: &RcFormula) -> bool {
        match f {
            RcFormula::Top => true,
            RcFormula::Conj(ps) => ps.iter().all(|p| self.satisfies(world, p)),
            RcFormula::Dia(n, body) => self.successors(*n, world).any(|y| self.satisfies(y, body)),
        }
    }

    /// The frame is valid and the witness satisfies `lhs` but not `rhs`.
    pub fn refutes(&self, lhs: &RcFormula, rhs: &RcFormula) -> bool {
        self.check_frame().is_ok() && self.satisfies(self.witness, lhs) && !self.satisfies(self.witness, rhs)
    }
}

// `top[x][y]` is the highest level at which x sees y. Relations at lower
// levels are implied, so downward inclusion holds by construction.
type Matrix = Vec<Vec<Option<Level>>>;

fn close(top: &mut Matrix) {
    let w = top.len();
    loop {
        let mut changed = false;
        let mut raise = |cell: &mut Option<Level>, to: Level| {
            if cell.is_none_or(|c| c < to) {
                *cell = Some(to);
                changed = true;
            }
        };
        for x in 0..w {
            for y in 0..w {
                let Some(a) = top[x][y] else { continue };
                for z in 0..w {
                    if let Some(b) = top[y][z] {
                        raise(&mut top[x][z], a.min(b));
                    }
                    if a >= 1 {
                        if let Some(b) = top[x][z] {
                            raise(&mut top[y][z], (a - 1).min(b));
                        }
                    }
                }
            }
        }
        if !changed {
            return;
        }
    }
}

fn to_model(top: &Matrix, max_level: Option<Level>, witness: usize) -> CounterModel {
    let mut relations = Vec::new();
    if let Some(max) = max_level {
        for n in 0..=max {
            let mut pairs = Vec::new();
            for (x, row) in top.iter().enumerate() {
                for (y, cell) in row.iter().enumerate() {
                    if cell.is_some_and(|c| c >= n) {
                        pairs.push((x, y));
                    }
                }
            }
            relations.push(pairs);
        }
    }
    CounterModel {
        worlds: top.len(),
        relations,
        witness,
    }
}

fn max_level(a: &RcFormula, b: &RcFormula) -> Option<Level> {
    a.max_level().into_iter().chain(b.max_level()).max()
}

/// Number of worlds in the tree unravelling of `f`, root included.
pub fn tree_worlds(f: &RcFormula) -> usize {
    1 + flatten(f)
        .iter()
        .map(|d| match d {
            RcFormula::Dia(_, body) => tree_worlds(body),
            _ => 0,
        })
        .sum::<usize>()
}

fn grow(top: &mut Matrix, at: usize, f: &RcFormula) {
    for d in flatten(f) {
        let RcFormula::Dia(n, body) = d else { continue };
        let child = top.len();
        for row in top.iter_mut() {
            row.push(None);
        }
        top.push(vec![None; child + 1]);
        top[at][child] = Some(n);
        grow(top, child, &body);
    }
}

/// The tree model of `a` closed under the frame conditions. It is the least
/// model of `a` at its root, so it refutes `a ⊢ b` whenever any model does.
pub fn canonical_model(a: &RcFormula, b: &RcFormula) -> CounterModel {
    let mut top: Matrix = vec![vec![None]];
    grow(&mut top, 0, a);
    close(&mut top);
    to_model(&top, max_level(a, b), 0)
}

// Exhaustive search is skipped above this many candidate frames.
const ENUMERATION_LIMIT: f64 = 2e6;

fn enumerate(a: &RcFormula, b: &RcFormula, worlds: usize) -> Option<CounterModel> {
    let levels = max_level(a, b);
    let choices = levels.map_or(1, |l| l as usize + 2);
    let cells = worlds * worlds;
    if (choices as f64).powi(cells as i32) > ENUMERATION_LIMIT {
        return None;
    }
    let mut digits = vec![0usize; cells];
    loop {
        let top: Matrix = (0..worlds)
            .map(|x| {
                (0..worlds)
                    .map(|y| match digits[x * worlds + y] {
                        0 => None,
                        d => Some(d as Level - 1),
                    })
                    .collect()
            })
            .collect();
        let mut closed = top.clone();
        close(&mut closed);
        if closed == top {
            let model = to_model(&top, levels, 0);
            if model.refutes(a, b) {
                return Some(model);
            }
        }
        let mut i = 0;
        loop {
            if i == cells {
                return None;
            }
            digits[i] += 1;
            if digits[i] < choices {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Largest frame size tried by exhaustive enumeration.
pub const MAX_ENUMERATED_WORLDS: usize = 3;

/// A verified countermodel to `a ⊢ b` with at most `max_worlds` worlds.
pub fn countermodel_bounded(a: &RcFormula, b: &RcFormula, max_worlds: usize) -> Option<CounterModel> {
    if max_worlds == 0 {
        return None;
    }
    if tree_worlds(a) <= max_worlds {
        let model = canonical_model(a, b);
        if model.refutes(a, b) {
            return Some(model);
        }
    }
    enumerate_countermodel(a, b, max_worlds)
}

/// Countermodel search by enumeration of small frames only.
pub fn enumerate_countermodel(a: &RcFormula, b: &RcFormula, max_worlds: usize) -> Option<CounterModel> {
    (1..=max_worlds.min(MAX_ENUMERATED_WORLDS)).find_map(|w| enumerate(a, b, w))
}
