//! Exact symbolic solver. Enumerates every relation hypothesis consistent
//! with the visible context rows and accepts candidates that extend all of
//! them into the third row. Serves as ground truth for the generator and as
//! an independent checker for the scoring pipeline.

use crate::domain::{
    arithmetic_carrier, compatible_relations, AttrState, AttributeKind, GridShape, MatrixItem,
    PuzzleInstance, Relation, RelationFamily,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

/// A fully parameterized relation believed to govern one attribute of one
/// component, holding on every visible complete row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub component: usize,
    pub attribute: AttributeKind,
    pub relation: Relation,
}

/// Hypotheses surviving induction for one governed slot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlotHypotheses {
    pub component: usize,
    pub attribute: AttributeKind,
    pub relations: Vec<Relation>,
}

/// Outcome of solving one puzzle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    /// Candidate indices consistent with some hypothesis in every slot.
    pub consistent: Vec<usize>,
    /// The single consistent index, when unique.
    pub chosen: Option<usize>,
}

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("row values mix attribute kinds")]
    KindMismatch,
    #[error("arithmetic has no integer carrier for {0}")]
    NoArithmeticCarrier(AttributeKind),
    #[error("item lacks component {component} attribute {attribute}")]
    MissingState {
        component: usize,
        attribute: AttributeKind,
    },
}

/// Whether a relation holds on one row of attribute states.
pub fn relation_holds(relation: &Relation, row: [&AttrState; 3]) -> Result<bool, OracleError> {
    let kind = row[0].kind();
    if row.iter().any(|s| s.kind() != kind) {
        return Err(OracleError::KindMismatch);
    }
    match relation {
        Relation::Constant => Ok(row[0] == row[1] && row[1] == row[2]),
        Relation::Progression { step } => match (row[0], row[1], row[2]) {
            (
                AttrState::Value { index: a, .. },
                AttrState::Value { index: b, .. },
                AttrState::Value { index: c, .. },
            ) => {
                let (a, b, c) = (*a as i16, *b as i16, *c as i16);
                let d = *step as i16;
                Ok(b == a + d && c == b + d)
            }
            (
                AttrState::Positions { grid, occupied: a },
                AttrState::Positions { occupied: b, .. },
                AttrState::Positions { occupied: c, .. },
            ) => {
                let capacity = grid.capacity();
                Ok(shift_set(a, *step, capacity) == *b && shift_set(b, *step, capacity) == *c)
            }
            _ => Err(OracleError::KindMismatch),
        },
        Relation::Arithmetic { minus } => match (row[0], row[1], row[2]) {
            (
                AttrState::Value { index: a, .. },
                AttrState::Value { index: b, .. },
                AttrState::Value { index: c, .. },
            ) => {
                let a = arithmetic_carrier(kind, *a)
                    .ok_or(OracleError::NoArithmeticCarrier(kind))?;
                let b = arithmetic_carrier(kind, *b)
                    .ok_or(OracleError::NoArithmeticCarrier(kind))?;
                let c = arithmetic_carrier(kind, *c)
                    .ok_or(OracleError::NoArithmeticCarrier(kind))?;
                Ok(if *minus { a - b == c } else { a + b == c })
            }
            (
                AttrState::Positions { occupied: a, .. },
                AttrState::Positions { occupied: b, .. },
                AttrState::Positions { occupied: c, .. },
            ) => {
                let combined: BTreeSet<u8> = if *minus {
                    a.difference(b).copied().collect()
                } else {
                    a.union(b).copied().collect()
                };
                Ok(combined == *c)
            }
            _ => Err(OracleError::KindMismatch),
        },
        Relation::DistributeThree { triple } => {
            if triple.iter().any(|s| s.kind() != kind) {
                return Err(OracleError::KindMismatch);
            }
            let distinct = row[0] != row[1] && row[1] != row[2] && row[0] != row[2];
            Ok(distinct && row.iter().all(|s| triple.contains(s)))
        }
    }
}

/// Cyclic shift of an occupancy set within a grid of the given capacity.
pub fn shift_set(occupied: &BTreeSet<u8>, step: i8, capacity: u8) -> BTreeSet<u8> {
    occupied
        .iter()
        .map(|&slot| {
            let shifted = (slot as i16 + step as i16).rem_euclid(capacity as i16);
            shifted as u8
        })
        .collect()
}

/// Every parameterization of every relation compatible with an attribute,
/// with distribute-three triples drawn from the given seed row.
fn candidate_relations(
    kind: AttributeKind,
    grid: GridShape,
    seed_row: &[AttrState; 3],
) -> Vec<Relation> {
    let families = compatible_relations(kind);
    let mut out = Vec::new();
    for family in families {
        match family {
            RelationFamily::Constant => out.push(Relation::Constant),
            RelationFamily::Progression => {
                if kind == AttributeKind::Position {
                    for step in 1..grid.capacity() as i8 {
                        out.push(Relation::Progression { step });
                    }
                } else {
                    for step in [-2i8, -1, 1, 2] {
                        out.push(Relation::Progression { step });
                    }
                }
            }
            RelationFamily::Arithmetic => {
                for minus in [false, true] {
                    out.push(Relation::Arithmetic { minus });
                }
            }
            RelationFamily::DistributeThree => {
                let distinct = seed_row[0] != seed_row[1]
                    && seed_row[1] != seed_row[2]
                    && seed_row[0] != seed_row[2];
                if distinct {
                    out.push(Relation::DistributeThree {
                        triple: seed_row.clone(),
                    });
                }
            }
        }
    }
    out
}

fn slot_row_states(
    items: [&MatrixItem; 3],
    component: usize,
    attribute: AttributeKind,
) -> Result<[AttrState; 3], OracleError> {
    let state = |item: &MatrixItem| {
        item.attr_state(component, attribute)
            .ok_or(OracleError::MissingState {
                component,
                attribute,
            })
    };
    Ok([state(items[0])?, state(items[1])?, state(items[2])?])
}

fn context_states(
    puzzle: &PuzzleInstance,
    component: usize,
    attribute: AttributeKind,
) -> Result<Vec<[AttrState; 3]>, OracleError> {
    puzzle
        .matrix
        .context_rows(puzzle.rows_included)
        .iter()
        .map(|row| slot_row_states([&row[0], &row[1], &row[2]], component, attribute))
        .collect()
}

fn relations_surviving(
    kind: AttributeKind,
    grid: GridShape,
    rows: &[[AttrState; 3]],
) -> Result<Vec<Relation>, OracleError> {
    let Some(seed) = rows.first() else {
        // With no complete rows nothing constrains induction; distribute-three
        // has no triple to bind to, so only the closed-form families remain.
        return Ok(candidate_relations(kind, grid, &placeholder_seed(kind, grid)));
    };
    let mut survivors = Vec::new();
    for relation in candidate_relations(kind, grid, seed) {
        let mut ok = true;
        for row in rows {
            if !relation_holds(&relation, [&row[0], &row[1], &row[2]])? {
                ok = false;
                break;
            }
        }
        if ok {
            survivors.push(relation);
        }
    }
    Ok(survivors)
}

fn placeholder_seed(kind: AttributeKind, grid: GridShape) -> [AttrState; 3] {
    // Three equal states: never distinct, so no distribute-three is seeded.
    let state = match kind {
        AttributeKind::Position => AttrState::Positions {
            grid,
            occupied: BTreeSet::from([0]),
        },
        _ => AttrState::Value { kind, index: 0 },
    };
    [state.clone(), state.clone(), state]
}

/// Induce, for every governed slot, all relation hypotheses holding on the
/// puzzle's visible complete rows.
pub fn induce(puzzle: &PuzzleInstance) -> Result<Vec<SlotHypotheses>, OracleError> {
    let grids = puzzle.subtask.component_grids();
    puzzle
        .subtask
        .governed_attributes()
        .into_iter()
        .map(|(component, attribute)| {
            let rows = context_states(puzzle, component, attribute)?;
            let relations = relations_surviving(attribute, grids[component], &rows)?;
            Ok(SlotHypotheses {
                component,
                attribute,
                relations,
            })
        })
        .collect()
}

/// Whether a hypothesis accepts a candidate as the ninth item.
pub fn consistent(
    puzzle: &PuzzleInstance,
    hypothesis: &Hypothesis,
    candidate: &MatrixItem,
) -> Result<bool, OracleError> {
    let row = slot_row_states(
        puzzle.matrix.final_row(candidate),
        hypothesis.component,
        hypothesis.attribute,
    )?;
    relation_holds(&hypothesis.relation, [&row[0], &row[1], &row[2]])
}

/// Solve a puzzle: a candidate is consistent when every governed slot has at
/// least one hypothesis that both survives the context rows and accepts the
/// candidate's third-row value.
pub fn solve(puzzle: &PuzzleInstance) -> Result<Solution, OracleError> {
    let grids = puzzle.subtask.component_grids();
    let governed = puzzle.subtask.governed_attributes();

    // Context row states per slot, computed once.
    let mut slots = Vec::with_capacity(governed.len());
    for &(component, attribute) in &governed {
        slots.push((component, attribute, context_states(puzzle, component, attribute)?));
    }

    let mut consistent_indices = Vec::new();
    'candidates: for (index, candidate) in puzzle.candidates.candidates.iter().enumerate() {
        for (component, attribute, ctx) in &slots {
            let final_states =
                slot_row_states(puzzle.matrix.final_row(candidate), *component, *attribute)?;
            let mut rows: Vec<[AttrState; 3]> = ctx.clone();
            rows.push(final_states);
            if relations_surviving(*attribute, grids[*component], &rows)?.is_empty() {
                continue 'candidates;
            }
        }
        consistent_indices.push(index);
    }

    let chosen = match consistent_indices.as_slice() {
        [single] => Some(*single),
        _ => None,
    };
    Ok(Solution {
        consistent: consistent_indices,
        chosen,
    })
}

/// Sizes of the consistent candidate set at each row-inclusion level, used
/// by ablation analyses.
pub fn consistent_set_sizes(puzzle: &PuzzleInstance) -> Result<[usize; 3], OracleError> {
    let mut sizes = [0usize; 3];
    for (i, rows_included) in (1u8..=3).enumerate() {
        let mut view = puzzle.clone();
        view.rows_included = rows_included.min(puzzle.rows_included);
        sizes[i] = solve(&view)?.consistent.len();
    }
    Ok(sizes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn value(kind: AttributeKind, index: u8) -> AttrState {
        AttrState::Value { kind, index }
    }

    fn color_row(a: u8, b: u8, c: u8) -> [AttrState; 3] {
        [
            value(AttributeKind::Color, a),
            value(AttributeKind::Color, b),
            value(AttributeKind::Color, c),
        ]
    }

    fn holds(relation: &Relation, row: &[AttrState; 3]) -> bool {
        relation_holds(relation, [&row[0], &row[1], &row[2]]).unwrap()
    }

    #[test]
    fn constant_holds_on_equal_triple() {
        assert!(holds(&Relation::Constant, &color_row(4, 4, 4)));
        assert!(!holds(&Relation::Constant, &color_row(4, 4, 5)));
    }

    #[test]
    fn progression_checks_both_steps() {
        let plus_two = Relation::Progression { step: 2 };
        assert!(holds(&plus_two, &color_row(1, 3, 5)));
        assert!(!holds(&plus_two, &color_row(1, 3, 4)));
        let minus_one = Relation::Progression { step: -1 };
        assert!(holds(&minus_one, &color_row(5, 4, 3)));
    }

    #[test]
    fn arithmetic_minus_on_counts() {
        // Counts (5, 2, 3) stored as indices (4, 1, 2); carrier is the count.
        let row = [
            value(AttributeKind::Number, 4),
            value(AttributeKind::Number, 1),
            value(AttributeKind::Number, 2),
        ];
        assert!(holds(&Relation::Arithmetic { minus: true }, &row));
        assert!(!holds(&Relation::Arithmetic { minus: false }, &row));
    }

    #[test]
    fn arithmetic_size_carrier_is_index_plus_one() {
        // Diameters 0.4 + 0.5 = 0.6: indices (0, 1, 2), carriers (1, 2, 3).
        let row = [
            value(AttributeKind::Size, 0),
            value(AttributeKind::Size, 1),
            value(AttributeKind::Size, 2),
        ];
        assert!(holds(&Relation::Arithmetic { minus: false }, &row));
    }

    #[test]
    fn arithmetic_on_type_reports_missing_carrier() {
        let row = [
            value(AttributeKind::Type, 0),
            value(AttributeKind::Type, 1),
            value(AttributeKind::Type, 2),
        ];
        let result = relation_holds(&Relation::Arithmetic { minus: false }, [&row[0], &row[1], &row[2]]);
        assert_eq!(result, Err(OracleError::NoArithmeticCarrier(AttributeKind::Type)));
    }

    #[test]
    fn distribute_three_is_set_membership() {
        let triple = [
            value(AttributeKind::Type, 0),
            value(AttributeKind::Type, 2),
            value(AttributeKind::Type, 4),
        ];
        let relation = Relation::DistributeThree { triple };
        let row = [
            value(AttributeKind::Type, 2),
            value(AttributeKind::Type, 4),
            value(AttributeKind::Type, 0),
        ];
        assert!(holds(&relation, &row));
        let repeated = [
            value(AttributeKind::Type, 2),
            value(AttributeKind::Type, 2),
            value(AttributeKind::Type, 0),
        ];
        assert!(!holds(&relation, &repeated));
    }

    #[test]
    fn mixed_kinds_rejected() {
        let row = [
            value(AttributeKind::Color, 1),
            value(AttributeKind::Size, 1),
            value(AttributeKind::Color, 1),
        ];
        assert_eq!(
            relation_holds(&Relation::Constant, [&row[0], &row[1], &row[2]]),
            Err(OracleError::KindMismatch)
        );
    }

    #[test]
    fn position_progression_is_cyclic() {
        let set = |slots: &[u8]| AttrState::Positions {
            grid: GridShape::TWO,
            occupied: slots.iter().copied().collect(),
        };
        let row = [set(&[2, 3]), set(&[3, 0]), set(&[0, 1])];
        assert!(holds(&Relation::Progression { step: 1 }, &row));
        assert!(!holds(&Relation::Progression { step: 2 }, &row));
    }

    #[test]
    fn position_arithmetic_union_and_difference() {
        let set = |slots: &[u8]| AttrState::Positions {
            grid: GridShape::TWO,
            occupied: slots.iter().copied().collect(),
        };
        let union_row = [set(&[0]), set(&[1, 2]), set(&[0, 1, 2])];
        assert!(holds(&Relation::Arithmetic { minus: false }, &union_row));
        let diff_row = [set(&[0, 1, 2]), set(&[1]), set(&[0, 2])];
        assert!(holds(&Relation::Arithmetic { minus: true }, &diff_row));
    }
}
