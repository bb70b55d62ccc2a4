//! Whole-puzzle invariant checking. Violations are returned as data, not
//! errors, and the check keeps going so a caller sees everything at once.

use super::*;

/// Check every structural invariant of a puzzle and return all violations;
/// an empty list means the puzzle is well formed.
pub fn validate(puzzle: &PuzzleInstance) -> Vec<String> {
    let mut out = Vec::new();

    if !(1..=3).contains(&puzzle.rows_included) {
        out.push(format!("rows_included {} outside 1..=3", puzzle.rows_included));
    }

    let n = puzzle.candidates.candidates.len();
    if n != 8 {
        out.push(format!("candidate count {n} != 8"));
    }
    if puzzle.candidates.answer_index >= n.max(1) {
        out.push(format!(
            "answer index {} out of range for {} candidates",
            puzzle.candidates.answer_index, n
        ));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if puzzle.candidates.candidates[i] == puzzle.candidates.candidates[j] {
                out.push(format!("candidates {i} and {j} are identical"));
            }
        }
    }

    for (where_, item) in items_with_names(puzzle) {
        check_item(puzzle.subtask, &where_, item, &mut out);
    }

    check_rules(puzzle, &mut out);
    out
}

fn items_with_names(puzzle: &PuzzleInstance) -> Vec<(String, &MatrixItem)> {
    let mut items = Vec::new();
    for (r, row) in puzzle.matrix.rows.iter().enumerate() {
        for (c, item) in row.iter().enumerate() {
            items.push((format!("item ({},{})", r + 1, c + 1), item));
        }
    }
    for (c, item) in puzzle.matrix.prefix.iter().enumerate() {
        items.push((format!("item (3,{})", c + 1), item));
    }
    for (i, item) in puzzle.candidates.candidates.iter().enumerate() {
        items.push((format!("candidate {i}"), item));
    }
    items
}

fn check_item(subtask: SubTask, where_: &str, item: &MatrixItem, out: &mut Vec<String>) {
    let grids = subtask.component_grids();
    if item.components.len() != grids.len() {
        out.push(format!(
            "{where_}: component count {} != {}",
            item.components.len(),
            grids.len()
        ));
        return;
    }
    for (c, (component, grid)) in item.components.iter().zip(grids).enumerate() {
        if component.id as usize != c {
            out.push(format!("{where_}: component {c} has id {}", component.id));
        }
        let layout = &component.layout;
        if layout.grid != *grid {
            out.push(format!(
                "{where_}: component {c} grid {}x{} != expected {}x{}",
                layout.grid.rows, layout.grid.cols, grid.rows, grid.cols
            ));
        }
        check_layout(subtask, where_, c, layout, out);
    }
}

fn check_layout(
    subtask: SubTask,
    where_: &str,
    component: usize,
    layout: &LayoutRecord,
    out: &mut Vec<String>,
) {
    let capacity = layout.grid.capacity();
    if layout.positions.is_empty() {
        out.push(format!("{where_}: component {component} has no occupied slots"));
    }
    if layout.positions.iter().any(|&slot| slot >= capacity) {
        out.push(format!(
            "{where_}: component {component} occupies a slot outside the {capacity}-slot grid"
        ));
    }
    let entity_slots: BTreeSet<u8> = layout.entities.keys().copied().collect();
    if entity_slots != layout.positions {
        out.push(format!("{where_}: component {component} entities/positions mismatch"));
    }

    for (slot, entity) in &layout.entities {
        for (kind, index, len) in [
            (AttributeKind::Type, entity.type_index, 5u8),
            (AttributeKind::Size, entity.size_index, 6),
            (AttributeKind::Color, entity.color_index, 10),
            (AttributeKind::Orientation, entity.orientation_index, 8),
        ] {
            if index >= len {
                out.push(format!(
                    "{where_}: component {component} slot {slot} {kind} index {index} outside domain of {len}"
                ));
            }
        }
    }

    // Rule-governed entity attributes are uniform across the layout.
    for kind in [AttributeKind::Type, AttributeKind::Size, AttributeKind::Color] {
        let mut values = layout
            .entities
            .values()
            .map(|e| e.value(kind).expect("entity-level kind"));
        if let Some(first) = values.next() {
            if values.any(|v| v != first) {
                out.push(format!(
                    "{where_}: component {component} {kind} varies across entities"
                ));
            }
        }
    }

    if subtask.color_fixed(component) {
        if layout.entities.values().any(|e| e.color_index != OIG_OUTER_COLOR) {
            out.push(format!(
                "{where_}: component {component} color must stay fixed at {OIG_OUTER_COLOR}"
            ));
        }
    }
}

fn check_rules(puzzle: &PuzzleInstance, out: &mut Vec<String>) {
    let governed = puzzle.subtask.governed_attributes();
    let mut seen = BTreeSet::new();
    for rule in &puzzle.rules {
        let slot = (rule.component, rule.attribute);
        if !seen.insert(slot) {
            out.push(format!(
                "duplicate rule for component {} {}",
                rule.component, rule.attribute
            ));
        }
        if !governed.contains(&slot) {
            out.push(format!(
                "rule on ungoverned attribute: component {} {}",
                rule.component, rule.attribute
            ));
        }
        if !compatible_relations(rule.attribute).contains(&rule.relation.family()) {
            out.push(format!(
                "relation {} incompatible with {}",
                rule.relation.family(),
                rule.attribute
            ));
        }
        check_relation_params(puzzle.subtask, rule, out);
    }
    for slot in &governed {
        if !puzzle.rules.iter().any(|r| (r.component, r.attribute) == *slot) {
            out.push(format!("missing rule for component {} {}", slot.0, slot.1));
        }
    }
}

fn check_relation_params(subtask: SubTask, rule: &RuleSpec, out: &mut Vec<String>) {
    match &rule.relation {
        Relation::Progression { step } => {
            if rule.attribute == AttributeKind::Position {
                let capacity = subtask.component_grids()[rule.component].capacity() as i8;
                if !(1..capacity).contains(step) {
                    out.push(format!(
                        "position progression shift {step} outside 1..{capacity}"
                    ));
                }
            } else if ![-2, -1, 1, 2].contains(step) {
                out.push(format!("progression step {step} not in {{-2,-1,1,2}}"));
            }
        }
        Relation::DistributeThree { triple } => {
            if triple[0] == triple[1] || triple[0] == triple[2] || triple[1] == triple[2] {
                out.push(format!(
                    "distribute-three triple for {} has repeated values",
                    rule.attribute
                ));
            }
        }
        Relation::Constant | Relation::Arithmetic { .. } => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_entity_item(type_index: u8, size_index: u8, color_index: u8) -> MatrixItem {
        let entity = EntityRecord {
            type_index,
            size_index,
            color_index,
            orientation_index: 0,
        };
        MatrixItem {
            components: vec![ComponentRecord {
                id: 0,
                layout: LayoutRecord {
                    grid: GridShape::SINGLE,
                    positions: BTreeSet::from([0]),
                    entities: BTreeMap::from([(0, entity)]),
                },
            }],
        }
    }

    fn tiny_center_puzzle() -> PuzzleInstance {
        // Constant type=2, progression(+1) size, constant color per row.
        let item = |s: u8, c: u8| single_entity_item(2, s, c);
        let matrix = Matrix {
            rows: [
                [item(0, 1), item(1, 1), item(2, 1)],
                [item(1, 4), item(2, 4), item(3, 4)],
            ],
            prefix: [item(2, 7), item(3, 7)],
        };
        let answer = item(4, 7);
        let mut candidates: Vec<MatrixItem> = (0..7).map(|i| item(i as u8 % 6, i as u8)).collect();
        candidates.insert(3, answer);
        PuzzleInstance {
            id: "test-0".into(),
            subtask: SubTask::Center,
            mode: Mode::Raven,
            seed: 0,
            matrix,
            candidates: CandidateSet {
                candidates,
                answer_index: 3,
            },
            rules: vec![
                RuleSpec {
                    component: 0,
                    attribute: AttributeKind::Type,
                    relation: Relation::Constant,
                },
                RuleSpec {
                    component: 0,
                    attribute: AttributeKind::Size,
                    relation: Relation::Progression { step: 1 },
                },
                RuleSpec {
                    component: 0,
                    attribute: AttributeKind::Color,
                    relation: Relation::Constant,
                },
            ],
            rows_included: 3,
            render_orientation: false,
            impartial_fallback: false,
        }
    }

    #[test]
    fn well_formed_puzzle_validates() {
        assert_eq!(validate(&tiny_center_puzzle()), Vec::<String>::new());
    }

    #[test]
    fn seven_candidates_flagged() {
        let mut puzzle = tiny_center_puzzle();
        puzzle.candidates.candidates.pop();
        let violations = validate(&puzzle);
        assert!(violations.iter().any(|v| v.contains("candidate count 7")));
    }

    #[test]
    fn entity_at_unoccupied_slot_flagged() {
        let mut puzzle = tiny_center_puzzle();
        let layout = &mut puzzle.matrix.rows[0][0].components[0].layout;
        layout.entities.insert(
            1,
            EntityRecord {
                type_index: 2,
                size_index: 0,
                color_index: 1,
                orientation_index: 0,
            },
        );
        let violations = validate(&puzzle);
        assert!(violations.iter().any(|v| v.contains("entities/positions mismatch")));
    }

    #[test]
    fn missing_rule_flagged() {
        let mut puzzle = tiny_center_puzzle();
        puzzle.rules.pop();
        let violations = validate(&puzzle);
        assert!(violations.iter().any(|v| v.contains("missing rule")));
    }

    #[test]
    fn all_violations_reported_not_just_first() {
        let mut puzzle = tiny_center_puzzle();
        puzzle.candidates.candidates.pop();
        puzzle.rules.pop();
        let violations = validate(&puzzle);
        assert!(violations.len() >= 2);
    }
}
