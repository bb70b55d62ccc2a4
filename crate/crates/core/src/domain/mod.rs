//! Typed model of Raven-style matrix structure: attributes, entities, layouts,
//! components, items, matrices and rules, plus whole-puzzle validation.
//!
//! Everything here is immutable after construction and safe to share across
//! threads.

mod validate;

pub use validate::validate;

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

/// Perceptual attributes of entities and layouts.
///
/// `Type`, `Size`, `Color` and `Orientation` belong to single entities;
/// `Number` and `Position` belong to a layout of entities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttributeKind {
    Type,
    Size,
    Color,
    Orientation,
    Number,
    Position,
}

impl AttributeKind {
    pub fn is_entity_level(self) -> bool {
        matches!(self, Self::Type | Self::Size | Self::Color | Self::Orientation)
    }

    pub fn is_layout_level(self) -> bool {
        !self.is_entity_level()
    }

    /// Stable lowercase label used in decomposition sub-prompt labels.
    pub fn label(self) -> &'static str {
        match self {
            Self::Type => "type",
            Self::Size => "size",
            Self::Color => "color",
            Self::Orientation => "orientation",
            Self::Number => "number",
            Self::Position => "position",
        }
    }
}

impl fmt::Display for AttributeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One value drawn from an attribute's ordered domain.
///
/// The index is a position in the domain returned by [`domain_of`]; the
/// mapping from indices to concrete percepts (shape names, diameters,
/// darkness levels, angles) is fixed:
///
/// * `Type`: triangle, square, pentagon, hexagon, circle (indices 0..=4)
/// * `Size`: diameters 0.4..=0.9 in steps of 0.1 (indices 0..=5)
/// * `Color`: darkness levels 0..=9
/// * `Orientation`: angles -135°..=180° in steps of 45° (indices 0..=7)
/// * `Number`: entity count minus one (indices 0..capacity)
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AttributeValue {
    pub kind: AttributeKind,
    pub index: u8,
}

impl AttributeValue {
    pub fn new(kind: AttributeKind, index: u8) -> Self {
        Self { kind, index }
    }
}

/// Rectangular arrangement of entity slots inside one component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GridShape {
    pub rows: u8,
    pub cols: u8,
}

impl GridShape {
    pub const SINGLE: GridShape = GridShape { rows: 1, cols: 1 };
    pub const TWO: GridShape = GridShape { rows: 2, cols: 2 };
    pub const THREE: GridShape = GridShape { rows: 3, cols: 3 };

    /// Number of slots in the grid.
    pub fn capacity(self) -> u8 {
        self.rows * self.cols
    }
}

/// Which slots of a grid are occupied by entities.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PositionSet {
    pub grid: GridShape,
    pub occupied: BTreeSet<u8>,
}

/// A single shape with its four perceptual attributes, stored as domain
/// indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EntityRecord {
    #[serde(rename = "type")]
    pub type_index: u8,
    #[serde(rename = "size")]
    pub size_index: u8,
    #[serde(rename = "color")]
    pub color_index: u8,
    #[serde(rename = "orientation")]
    pub orientation_index: u8,
}

impl EntityRecord {
    /// The entity's value for an entity-level attribute.
    pub fn value(&self, kind: AttributeKind) -> Option<AttributeValue> {
        let index = match kind {
            AttributeKind::Type => self.type_index,
            AttributeKind::Size => self.size_index,
            AttributeKind::Color => self.color_index,
            AttributeKind::Orientation => self.orientation_index,
            _ => return None,
        };
        Some(AttributeValue::new(kind, index))
    }
}

/// A grid of entities: occupancy plus the entity at each occupied slot.
///
/// `positions` and the key set of `entities` must agree; rule-governed
/// entity attributes are uniform across all entities in the layout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutRecord {
    pub grid: GridShape,
    pub positions: BTreeSet<u8>,
    pub entities: BTreeMap<u8, EntityRecord>,
}

impl LayoutRecord {
    pub fn entity_count(&self) -> usize {
        self.entities.len()
    }

    pub fn position_set(&self) -> PositionSet {
        PositionSet {
            grid: self.grid,
            occupied: self.positions.clone(),
        }
    }

    /// Entities in row-major slot order.
    pub fn entities_in_order(&self) -> impl Iterator<Item = (&u8, &EntityRecord)> {
        self.entities.iter()
    }
}

/// One independent sub-structure of an item.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentRecord {
    pub id: u8,
    pub layout: LayoutRecord,
}

/// One cell of the matrix (or one answer candidate).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixItem {
    pub components: Vec<ComponentRecord>,
}

impl MatrixItem {
    /// The item's state for a governed attribute of one component.
    ///
    /// Entity-level attributes report the layout-wide uniform value (taken
    /// from the first entity); `Number` reports count-1 as a domain index;
    /// `Position` reports the occupancy set.
    pub fn attr_state(&self, component: usize, kind: AttributeKind) -> Option<AttrState> {
        let layout = &self.components.get(component)?.layout;
        match kind {
            AttributeKind::Number => Some(AttrState::Value {
                kind,
                index: (layout.entity_count() as u8).saturating_sub(1),
            }),
            AttributeKind::Position => Some(AttrState::Positions {
                grid: layout.grid,
                occupied: layout.positions.clone(),
            }),
            _ => {
                let entity = layout.entities.values().next()?;
                let value = entity.value(kind)?;
                Some(AttrState::Value {
                    kind,
                    index: value.index,
                })
            }
        }
    }
}

/// The seven sub-task families, each fixing component count and grid shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SubTask {
    #[serde(rename = "center")]
    Center,
    #[serde(rename = "grid2x2")]
    Grid2x2,
    #[serde(rename = "grid3x3")]
    Grid3x3,
    #[serde(rename = "lr")]
    LeftRight,
    #[serde(rename = "ud")]
    UpDown,
    #[serde(rename = "oic")]
    OutInCenter,
    #[serde(rename = "oig")]
    OutInGrid,
}

/// Fixed darkness index for the outer component of `OutInGrid`; the outer
/// shape is an outline and its color carries no rule.
pub const OIG_OUTER_COLOR: u8 = 0;

impl SubTask {
    pub const ALL: [SubTask; 7] = [
        SubTask::Center,
        SubTask::Grid2x2,
        SubTask::Grid3x3,
        SubTask::LeftRight,
        SubTask::UpDown,
        SubTask::OutInCenter,
        SubTask::OutInGrid,
    ];

    /// Grid shape of each component, in component order.
    pub fn component_grids(self) -> &'static [GridShape] {
        match self {
            SubTask::Center => &[GridShape::SINGLE],
            SubTask::Grid2x2 => &[GridShape::TWO],
            SubTask::Grid3x3 => &[GridShape::THREE],
            SubTask::LeftRight | SubTask::UpDown | SubTask::OutInCenter => {
                &[GridShape::SINGLE, GridShape::SINGLE]
            }
            SubTask::OutInGrid => &[GridShape::SINGLE, GridShape::TWO],
        }
    }

    pub fn component_count(self) -> usize {
        self.component_grids().len()
    }

    /// Whether a component's entity color is pinned rather than rule-governed.
    pub fn color_fixed(self, component: usize) -> bool {
        self == SubTask::OutInGrid && component == 0
    }

    /// Every rule-governed `(component, attribute)` pair, in canonical order:
    /// layout attributes first (when the grid holds more than one entity),
    /// then type, size, color.
    pub fn governed_attributes(self) -> Vec<(usize, AttributeKind)> {
        let mut out = Vec::new();
        for (component, grid) in self.component_grids().iter().enumerate() {
            if grid.capacity() > 1 {
                out.push((component, AttributeKind::Number));
                out.push((component, AttributeKind::Position));
            }
            out.push((component, AttributeKind::Type));
            out.push((component, AttributeKind::Size));
            if !self.color_fixed(component) {
                out.push((component, AttributeKind::Color));
            }
        }
        out
    }

    pub fn name(self) -> &'static str {
        match self {
            SubTask::Center => "center",
            SubTask::Grid2x2 => "grid2x2",
            SubTask::Grid3x3 => "grid3x3",
            SubTask::LeftRight => "lr",
            SubTask::UpDown => "ud",
            SubTask::OutInCenter => "oic",
            SubTask::OutInGrid => "oig",
        }
    }
}

impl fmt::Display for SubTask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Value carrier shared by rules and the solver: either a position in an
/// ordered attribute domain or an occupancy set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "lowercase")]
pub enum AttrState {
    Value { kind: AttributeKind, index: u8 },
    Positions { grid: GridShape, occupied: BTreeSet<u8> },
}

impl AttrState {
    pub fn kind(&self) -> AttributeKind {
        match self {
            AttrState::Value { kind, .. } => *kind,
            AttrState::Positions { .. } => AttributeKind::Position,
        }
    }
}

/// A row-wise relation with its parameters.
///
/// `Progression` steps are ±1 or ±2 for ordinal attributes; for `Position`
/// the step is a cyclic slot shift stored canonically in `1..capacity`.
/// `DistributeThree` holds the value triple; each matrix row is a rotation
/// of it (row i+1 is the left rotation of row i).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Relation {
    Constant,
    Progression { step: i8 },
    Arithmetic { minus: bool },
    DistributeThree { triple: [AttrState; 3] },
}

impl Relation {
    pub fn family(&self) -> RelationFamily {
        match self {
            Relation::Constant => RelationFamily::Constant,
            Relation::Progression { .. } => RelationFamily::Progression,
            Relation::Arithmetic { .. } => RelationFamily::Arithmetic,
            Relation::DistributeThree { .. } => RelationFamily::DistributeThree,
        }
    }

    /// Same relation up to the (irrelevant) ordering of a distribute-three
    /// triple.
    pub fn equivalent(&self, other: &Relation) -> bool {
        match (self, other) {
            (Relation::DistributeThree { triple: a }, Relation::DistributeThree { triple: b }) => {
                let mut a: Vec<_> = a.iter().collect();
                let mut b: Vec<_> = b.iter().collect();
                a.sort();
                b.sort();
                a == b
            }
            _ => self == other,
        }
    }
}

/// Relation family without parameters; the unit of the attribute
/// compatibility matrix and of result breakdowns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationFamily {
    Constant,
    Progression,
    Arithmetic,
    DistributeThree,
}

impl RelationFamily {
    pub const ALL: [RelationFamily; 4] = [
        RelationFamily::Constant,
        RelationFamily::Progression,
        RelationFamily::Arithmetic,
        RelationFamily::DistributeThree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RelationFamily::Constant => "constant",
            RelationFamily::Progression => "progression",
            RelationFamily::Arithmetic => "arithmetic",
            RelationFamily::DistributeThree => "distribute_three",
        }
    }
}

impl fmt::Display for RelationFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which relation families may govern an attribute.
///
/// Orientation is never rule-governed (it is the noise attribute);
/// arithmetic over shape classes is meaningless, so `Type` excludes it.
pub fn compatible_relations(kind: AttributeKind) -> &'static [RelationFamily] {
    match kind {
        AttributeKind::Type => &[
            RelationFamily::Constant,
            RelationFamily::Progression,
            RelationFamily::DistributeThree,
        ],
        AttributeKind::Size | AttributeKind::Color | AttributeKind::Number | AttributeKind::Position => {
            &RelationFamily::ALL
        }
        AttributeKind::Orientation => &[],
    }
}

/// Integer carrier used by arithmetic rules: darkness for color, diameter
/// rank (index+1) for size, entity count for number.
pub fn arithmetic_carrier(kind: AttributeKind, index: u8) -> Option<i32> {
    match kind {
        AttributeKind::Color => Some(index as i32),
        AttributeKind::Size | AttributeKind::Number => Some(index as i32 + 1),
        _ => None,
    }
}

/// One rule: a relation applied to one attribute of one component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleSpec {
    pub component: usize,
    pub attribute: AttributeKind,
    pub relation: Relation,
}

/// The eight given items: two complete context rows plus the incomplete
/// third row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    pub rows: [[MatrixItem; 3]; 2],
    pub prefix: [MatrixItem; 2],
}

impl Matrix {
    /// Complete context rows visible at a given inclusion level:
    /// 3 keeps both, 2 keeps only row two, 1 keeps none.
    pub fn context_rows(&self, rows_included: u8) -> &[[MatrixItem; 3]] {
        let skip = (3u8.saturating_sub(rows_included)).min(2) as usize;
        &self.rows[skip..]
    }

    /// The third row completed by a candidate item.
    pub fn final_row<'a>(&'a self, candidate: &'a MatrixItem) -> [&'a MatrixItem; 3] {
        [&self.prefix[0], &self.prefix[1], candidate]
    }
}

/// The eight answer choices and which one is correct.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateSet {
    pub candidates: Vec<MatrixItem>,
    pub answer_index: usize,
}

/// Candidate-set construction style.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Each distractor perturbs a single governed attribute of the answer.
    Raven,
    /// Attribute-bisection answer set: every perturbed attribute value
    /// appears in exactly half of the candidates.
    Impartial,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Raven => "raven",
            Mode::Impartial => "impartial",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn default_rows_included() -> u8 {
    3
}

/// A complete puzzle: given items, candidates, generating rules and
/// provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PuzzleInstance {
    pub id: String,
    pub subtask: SubTask,
    pub mode: Mode,
    pub seed: u64,
    pub matrix: Matrix,
    pub candidates: CandidateSet,
    pub rules: Vec<RuleSpec>,
    /// How many matrix rows are visible (counting the incomplete third row);
    /// row ablation lowers this from the default of 3.
    #[serde(default = "default_rows_included")]
    pub rows_included: u8,
    /// Render orientation as a fourth entity attribute (distractor studies).
    #[serde(default)]
    pub render_orientation: bool,
    /// Set when impartial candidate generation fell back to raven mode
    /// because fewer than three governed attributes were available.
    #[serde(default)]
    pub impartial_fallback: bool,
}

impl PuzzleInstance {
    pub fn answer(&self) -> &MatrixItem {
        &self.candidates.candidates[self.candidates.answer_index]
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum DomainError {
    #[error("position has no ordered value domain; use occupancy sets")]
    PositionDomainUndefined,
}

/// Number of values in an attribute's ordered domain.
pub fn domain_len(kind: AttributeKind, grid: GridShape) -> Result<usize, DomainError> {
    match kind {
        AttributeKind::Type => Ok(5),
        AttributeKind::Size => Ok(6),
        AttributeKind::Color => Ok(10),
        AttributeKind::Orientation => Ok(8),
        AttributeKind::Number => Ok(grid.capacity() as usize),
        AttributeKind::Position => Err(DomainError::PositionDomainUndefined),
    }
}

/// The full ordered domain of an attribute.
///
/// `Position` is combinatorial rather than ordinal and is rejected.
pub fn domain_of(kind: AttributeKind, grid: GridShape) -> Result<Vec<AttributeValue>, DomainError> {
    let len = domain_len(kind, grid)?;
    Ok((0..len as u8).map(|i| AttributeValue::new(kind, i)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_lengths() {
        let g = GridShape::SINGLE;
        assert_eq!(domain_of(AttributeKind::Type, g).unwrap().len(), 5);
        assert_eq!(domain_of(AttributeKind::Size, g).unwrap().len(), 6);
        assert_eq!(domain_of(AttributeKind::Color, g).unwrap().len(), 10);
        assert_eq!(domain_of(AttributeKind::Orientation, g).unwrap().len(), 8);
        assert_eq!(domain_of(AttributeKind::Number, GridShape::TWO).unwrap().len(), 4);
        assert_eq!(domain_of(AttributeKind::Number, GridShape::THREE).unwrap().len(), 9);
        assert_eq!(
            domain_of(AttributeKind::Position, GridShape::TWO),
            Err(DomainError::PositionDomainUndefined)
        );
    }

    #[test]
    fn domain_indices_are_ordered() {
        let values = domain_of(AttributeKind::Size, GridShape::SINGLE).unwrap();
        for (i, v) in values.iter().enumerate() {
            assert_eq!(v.index as usize, i);
            assert_eq!(v.kind, AttributeKind::Size);
        }
    }

    #[test]
    fn governed_attribute_sets() {
        assert_eq!(SubTask::Center.governed_attributes().len(), 3);
        assert_eq!(SubTask::Grid2x2.governed_attributes().len(), 5);
        assert_eq!(SubTask::Grid3x3.governed_attributes().len(), 5);
        assert_eq!(SubTask::LeftRight.governed_attributes().len(), 6);
        assert_eq!(SubTask::UpDown.governed_attributes().len(), 6);
        assert_eq!(SubTask::OutInCenter.governed_attributes().len(), 6);
        // Outer color is fixed, so 2 outer + 5 inner.
        assert_eq!(SubTask::OutInGrid.governed_attributes().len(), 7);
        assert!(!SubTask::OutInGrid
            .governed_attributes()
            .contains(&(0, AttributeKind::Color)));
    }

    #[test]
    fn grid2x2_governed_order_is_layout_first() {
        let governed = SubTask::Grid2x2.governed_attributes();
        let kinds: Vec<_> = governed.iter().map(|(_, k)| *k).collect();
        assert_eq!(
            kinds,
            vec![
                AttributeKind::Number,
                AttributeKind::Position,
                AttributeKind::Type,
                AttributeKind::Size,
                AttributeKind::Color,
            ]
        );
    }

    #[test]
    fn orientation_is_never_governed() {
        for subtask in SubTask::ALL {
            assert!(subtask
                .governed_attributes()
                .iter()
                .all(|(_, k)| *k != AttributeKind::Orientation));
        }
        assert!(compatible_relations(AttributeKind::Orientation).is_empty());
    }

    #[test]
    fn type_excludes_arithmetic() {
        assert!(!compatible_relations(AttributeKind::Type).contains(&RelationFamily::Arithmetic));
    }

    #[test]
    fn distribute_three_equivalence_ignores_triple_order() {
        let v = |i| AttrState::Value {
            kind: AttributeKind::Type,
            index: i,
        };
        let a = Relation::DistributeThree {
            triple: [v(0), v(2), v(4)],
        };
        let b = Relation::DistributeThree {
            triple: [v(4), v(0), v(2)],
        };
        assert!(a.equivalent(&b));
        assert_ne!(a, b);
    }
}
