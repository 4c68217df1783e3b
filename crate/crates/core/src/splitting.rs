//! Complete splitting of the place `z₁ = −1` and affine solution counts.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::ff::{enumerate_field, FfError, Field, FieldElement};
use crate::tower::{fiber_linpoly_f, u_poly_for_z, z_from_x, z_step, Direction, TowerError, TowerParams};

/// Largest `ℓ^level · q^{n−1}` accepted by [`count_solutions`].
pub const CENSUS_BUDGET: u128 = 1 << 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplittingError {
    #[error("census needs level 1 or 2 (got {0})")]
    BadLevel(usize),
    #[error("census of size {0} exceeds the budget")]
    BudgetExceeded(u128),
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Field(#[from] FfError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    #[serde(rename = "towerF")]
    TowerF,
    #[serde(rename = "towerH")]
    TowerH,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::TowerF => "towerF",
            Mode::TowerH => "towerH",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelStat {
    pub level: usize,
    /// Nodes at this level.
    pub nodes: u64,
    pub expected_nodes: u64,
    /// Children expected below every node of this level.
    pub expected_children: u64,
    pub ok: bool,
}

/// One fiber of the defining equation of F over a fixed `x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberRow {
    pub x_index: u64,
    pub x: String,
    pub roots: u64,
    pub expected: u64,
    pub all_nonzero: bool,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub chain: Vec<String>,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SplittingReport {
    pub params: TowerParams,
    pub mode: Mode,
    pub levels: usize,
    pub per_level: Vec<LevelStat>,
    /// Per-`x` fibers (tower F only).
    pub fibers: Vec<FiberRow>,
    pub pole_hits: u64,
    pub failures: Vec<Witness>,
    /// Every `(x, y)` found, in enumeration order (tower F only).
    #[serde(skip)]
    pub solutions: Vec<(FieldElement, FieldElement)>,
}

impl SplittingReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.pole_hits == 0 && self.per_level.iter().all(|l| l.ok)
    }
}

fn expected_children(params: &TowerParams) -> u64 {
    params.q().pow(params.n() as u32 - 1)
}

/// Distinct `y ∈ F_ℓ` on the fiber over `x`, by evaluating at every element.
fn fiber_roots(params: &TowerParams, x: &FieldElement, all: &[FieldElement]) -> Result<Vec<FieldElement>, TowerError> {
    let lin = fiber_linpoly_f(params, x)?;
    let mut out = Vec::new();
    for y in all {
        if lin.eval(y)?.is_one() {
            out.push(y.clone());
        }
    }
    Ok(out)
}

/// For every `x ∈ F_ℓ^*`, the fiber has exactly `q^{n−1}` distinct roots,
/// all in `F_ℓ^*`.
pub fn verify_splitting_f(params: &TowerParams) -> Result<SplittingReport, SplittingError> {
    let field = params.field()?;
    let all = enumerate_field(&field)?;
    let expected = expected_children(params);
    let mut fibers = Vec::new();
    let mut failures = Vec::new();
    let mut solutions = Vec::new();
    for x in all.iter().skip(1) {
        let ys = fiber_roots(params, x, &all)?;
        let all_nonzero = ys.iter().all(|y| !y.is_zero());
        let ok = ys.len() as u64 == expected && all_nonzero;
        if !ok {
            failures.push(Witness {
                chain: vec![x.to_string()],
                reason: format!("{} roots (expected {expected}), all nonzero: {all_nonzero}", ys.len()),
            });
        }
        fibers.push(FiberRow {
            x_index: x.index().expect("enumerable field"),
            x: x.to_string(),
            roots: ys.len() as u64,
            expected,
            all_nonzero,
            ok,
        });
        solutions.extend(ys.into_iter().map(|y| (x.clone(), y)));
    }
    let nodes = all.len() as u64 - 1;
    Ok(SplittingReport {
        params: *params,
        mode: Mode::TowerF,
        levels: 1,
        per_level: vec![LevelStat {
            level: 1,
            nodes,
            expected_nodes: nodes,
            expected_children: expected,
            ok: fibers.iter().all(|f| f.ok),
        }],
        fibers,
        pole_hits: 0,
        failures,
        solutions,
    })
}

/// Breadth-first walk of the chain tree rooted at the distinguished `z₁`.
///
/// A node at level `d` is a chain `u_1, ..., u_d` in `F_ℓ`; its children are
/// the roots `u` of the u-polynomial over `z = right(u_d)` (or `z₁` at the
/// root), each checked to satisfy `left(u) = z`.
pub fn enumerate_chains_h(params: &TowerParams, depth: usize) -> Result<SplittingReport, SplittingError> {
    assert!(depth >= 1, "depth must be positive");
    let field = params.field()?;
    let all = enumerate_field(&field)?;
    let expected = expected_children(params);
    let z1 = z_from_x(params, &field.one());

    let mut memo: HashMap<FieldElement, Vec<FieldElement>> = HashMap::new();
    let mut roots_over = |z: &FieldElement| -> Result<Vec<FieldElement>, TowerError> {
        if let Some(r) = memo.get(z) {
            return Ok(r.clone());
        }
        let poly = u_poly_for_z(params, z)?;
        let mut roots = Vec::new();
        for u in &all {
            if poly.eval(u)?.is_zero() {
                roots.push(u.clone());
            }
        }
        memo.insert(z.clone(), roots.clone());
        Ok(roots)
    };

    struct Node {
        chain: Vec<FieldElement>,
        z: FieldElement,
    }
    let mut level_nodes = vec![Node {
        chain: Vec::new(),
        z: z1,
    }];
    let mut per_level = vec![LevelStat {
        level: 0,
        nodes: 1,
        expected_nodes: 1,
        expected_children: expected,
        ok: true,
    }];
    let mut failures = Vec::new();
    let mut pole_hits = 0;
    let show = |chain: &[FieldElement]| chain.iter().map(|u| u.to_string()).collect::<Vec<_>>();

    for level in 1..=depth {
        let mut next = Vec::new();
        let mut level_ok = true;
        for node in &level_nodes {
            let roots = roots_over(&node.z)?;
            if roots.len() as u64 != expected {
                level_ok = false;
                failures.push(Witness {
                    chain: show(&node.chain),
                    reason: format!("{} roots over z = {} (expected {expected})", roots.len(), node.z),
                });
            }
            for u in roots {
                let mut chain = node.chain.clone();
                chain.push(u.clone());
                match z_step(params, &u, Direction::Left) {
                    Ok(z) if z == node.z => {}
                    Ok(z) => {
                        level_ok = false;
                        failures.push(Witness {
                            chain: show(&chain),
                            reason: format!("left step gives {z}, expected {}", node.z),
                        });
                    }
                    Err(_) => {
                        pole_hits += 1;
                        level_ok = false;
                        failures.push(Witness {
                            chain: show(&chain),
                            reason: "pole in left step".into(),
                        });
                    }
                }
                if level == depth {
                    next.push(Node {
                        chain,
                        z: node.z.clone(),
                    });
                    continue;
                }
                match z_step(params, &u, Direction::Right) {
                    Ok(z) if !z.is_zero() => next.push(Node { chain, z }),
                    Ok(_) => {
                        level_ok = false;
                        failures.push(Witness {
                            chain: show(&chain),
                            reason: "next z is 0".into(),
                        });
                    }
                    Err(_) => {
                        pole_hits += 1;
                        level_ok = false;
                        failures.push(Witness {
                            chain: show(&chain),
                            reason: "pole in right step".into(),
                        });
                    }
                }
            }
        }
        let expected_nodes = expected.pow(level as u32);
        per_level.push(LevelStat {
            level,
            nodes: next.len() as u64,
            expected_nodes,
            expected_children: expected,
            ok: level_ok && next.len() as u64 == expected_nodes,
        });
        level_nodes = next;
    }
    Ok(SplittingReport {
        params: *params,
        mode: Mode::TowerH,
        levels: depth,
        per_level,
        fibers: Vec::new(),
        pole_hits,
        failures,
        solutions: Vec::new(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub x_index: u64,
    pub x: String,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Census {
    pub level: usize,
    pub rows: Vec<CensusRow>,
    pub total: u64,
}

/// Affine `F_ℓ`-points of the level-1 model (`(x, y)`) or level-2 model
/// (`(x, y, w)` with both consecutive pairs on the curve), keyed by `x`.
pub fn count_solutions(params: &TowerParams, level: usize) -> Result<Census, SplittingError> {
    if !(1..=2).contains(&level) {
        return Err(SplittingError::BadLevel(level));
    }
    let size = (params.ell() as u128).pow(level as u32) * expected_children(params) as u128;
    if size > CENSUS_BUDGET {
        return Err(SplittingError::BudgetExceeded(size));
    }
    let field: Field = params.field()?;
    let all = enumerate_field(&field)?;
    let mut fiber: Vec<Vec<FieldElement>> = vec![Vec::new()];
    for x in all.iter().skip(1) {
        fiber.push(fiber_roots(params, x, &all)?);
    }
    let idx = |y: &FieldElement| y.index().expect("enumerable field") as usize;
    let rows: Vec<CensusRow> = all
        .iter()
        .map(|x| {
            let ys = &fiber[idx(x)];
            let count = match level {
                1 => ys.len() as u64,
                _ => ys.iter().map(|y| fiber[idx(y)].len() as u64).sum(),
            };
            CensusRow {
                x_index: idx(x) as u64,
                x: x.to_string(),
                count,
            }
        })
        .collect();
    let total = rows.iter().map(|r| r.count).sum();
    Ok(Census { level, rows, total })
}
