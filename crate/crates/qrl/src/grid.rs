//! The 13×13 gridworld.
//!
//! Cells are addressed as (col, row) with row 0 at the top; moving up
//! decreases the row. Four actions move one cell at a time. A move into a
//! blocked cell or off the grid is not executed: the agent stays put and
//! still pays the step reward. Reaching the goal pays the goal reward and
//! ends the episode.
//!
//! Layouts load from a plain-text format: exactly 13 lines of 13 characters
//! from `#` (blocked), `.` (free), `S` (start), `G` (goal), with exactly one
//! `S` and one `G` and the goal reachable from the start.

use crate::env::{EnvError, Environment, StepOutcome};
use std::collections::VecDeque;
use thiserror::Error;

pub const GRID_SIZE: usize = 13;
pub const STEP_REWARD: f64 = -1.0;
pub const GOAL_REWARD: f64 = 100.0;

/// A grid cell, addressed as (col, row).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub col: u8,
    pub row: u8,
}

impl Cell {
    pub fn new(col: u8, row: u8) -> Self {
        Self { col, row }
    }
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.col, self.row)
    }
}

/// The four cell-to-cell actions. The index encoding is fixed:
/// 0 = up, 1 = down, 2 = left, 3 = right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Action {
    Up = 0,
    Down = 1,
    Left = 2,
    Right = 3,
}

impl Action {
    pub const ALL: [Action; 4] = [Action::Up, Action::Down, Action::Left, Action::Right];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Action> {
        Action::ALL.get(index).copied()
    }
}

impl std::fmt::Display for Action {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Action::Up => "up",
            Action::Down => "down",
            Action::Left => "left",
            Action::Right => "right",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LayoutError {
    #[error("expected {GRID_SIZE} lines, found {0}")]
    WrongLineCount(usize),
    #[error("line {line}: expected {GRID_SIZE} characters, found {found}")]
    WrongLineLength { line: usize, found: usize },
    #[error("line {line}, column {col}: unknown character {ch:?}")]
    UnknownCharacter { line: usize, col: usize, ch: char },
    #[error("layout has no start cell 'S'")]
    MissingStart,
    #[error("line {line}, column {col}: duplicate start cell")]
    DuplicateStart { line: usize, col: usize },
    #[error("layout has no goal cell 'G'")]
    MissingGoal,
    #[error("line {line}, column {col}: duplicate goal cell")]
    DuplicateGoal { line: usize, col: usize },
    #[error("goal is not reachable from the start through free cells")]
    UnreachableGoal,
}

/// The gridworld map: blocked cells, start, goal, and the reward scheme.
///
/// Immutable after construction and safe to share across concurrent runs.
#[derive(Debug, Clone, PartialEq)]
pub struct GridWorld {
    blocked: [bool; GRID_SIZE * GRID_SIZE],
    start: Cell,
    goal: Cell,
}

impl GridWorld {
    /// The canonical layout: the outer ring blocked, the 11×11 interior
    /// free, start at (1,1) and goal at (11,11).
    pub fn default_layout() -> GridWorld {
        let mut blocked = [false; GRID_SIZE * GRID_SIZE];
        for i in 0..GRID_SIZE {
            blocked[cell_index(Cell::new(i as u8, 0))] = true;
            blocked[cell_index(Cell::new(i as u8, (GRID_SIZE - 1) as u8))] = true;
            blocked[cell_index(Cell::new(0, i as u8))] = true;
            blocked[cell_index(Cell::new((GRID_SIZE - 1) as u8, i as u8))] = true;
        }
        GridWorld {
            blocked,
            start: Cell::new(1, 1),
            goal: Cell::new(11, 11),
        }
    }

    /// Parses a layout document, validating dimensions, the character set,
    /// start/goal uniqueness, and goal reachability.
    pub fn parse_layout(text: &str) -> Result<GridWorld, LayoutError> {
        let lines: Vec<&str> = text.lines().collect();
        if lines.len() != GRID_SIZE {
            return Err(LayoutError::WrongLineCount(lines.len()));
        }
        let mut blocked = [false; GRID_SIZE * GRID_SIZE];
        let mut start = None;
        let mut goal = None;
        for (row, line) in lines.iter().enumerate() {
            let chars: Vec<char> = line.chars().collect();
            if chars.len() != GRID_SIZE {
                return Err(LayoutError::WrongLineLength {
                    line: row,
                    found: chars.len(),
                });
            }
            for (col, ch) in chars.iter().enumerate() {
                let cell = Cell::new(col as u8, row as u8);
                match ch {
                    '#' => blocked[cell_index(cell)] = true,
                    '.' => {}
                    'S' => {
                        if start.is_some() {
                            return Err(LayoutError::DuplicateStart { line: row, col });
                        }
                        start = Some(cell);
                    }
                    'G' => {
                        if goal.is_some() {
                            return Err(LayoutError::DuplicateGoal { line: row, col });
                        }
                        goal = Some(cell);
                    }
                    other => {
                        return Err(LayoutError::UnknownCharacter {
                            line: row,
                            col,
                            ch: *other,
                        })
                    }
                }
            }
        }
        let start = start.ok_or(LayoutError::MissingStart)?;
        let goal = goal.ok_or(LayoutError::MissingGoal)?;
        let grid = GridWorld {
            blocked,
            start,
            goal,
        };
        if grid.shortest_path_len(start, goal).is_none() {
            return Err(LayoutError::UnreachableGoal);
        }
        Ok(grid)
    }

    /// Writes the layout back out in the file format; `parse_layout` of the
    /// result reproduces the grid.
    pub fn to_layout_string(&self) -> String {
        let mut out = String::with_capacity(GRID_SIZE * (GRID_SIZE + 1));
        for row in 0..GRID_SIZE {
            for col in 0..GRID_SIZE {
                let cell = Cell::new(col as u8, row as u8);
                let ch = if cell == self.start {
                    'S'
                } else if cell == self.goal {
                    'G'
                } else if self.is_blocked(cell) {
                    '#'
                } else {
                    '.'
                };
                out.push(ch);
            }
            out.push('\n');
        }
        out
    }

    pub fn start(&self) -> Cell {
        self.start
    }

    pub fn goal(&self) -> Cell {
        self.goal
    }

    pub fn is_blocked(&self, cell: Cell) -> bool {
        self.blocked[cell_index(cell)]
    }

    pub fn is_free(&self, cell: Cell) -> bool {
        !self.is_blocked(cell)
    }

    /// All free cells in (col, row) order, the goal included.
    pub fn free_cells(&self) -> Vec<Cell> {
        let mut cells = Vec::new();
        for col in 0..GRID_SIZE {
            for row in 0..GRID_SIZE {
                let cell = Cell::new(col as u8, row as u8);
                if self.is_free(cell) {
                    cells.push(cell);
                }
            }
        }
        cells
    }

    /// One deterministic transition. Moves that would leave the grid or
    /// enter a blocked cell are not executed: the state is unchanged and the
    /// step reward still applies. Entering the goal pays the goal reward
    /// instead and terminates.
    pub fn step_action(&self, state: Cell, action: Action) -> Result<StepOutcome<Cell>, EnvError> {
        if self.is_blocked(state) {
            return Err(EnvError::InvalidState(format!("{state} is blocked")));
        }
        if state == self.goal {
            return Err(EnvError::InvalidState(format!("{state} is the goal")));
        }
        let target = neighbor(state, action).filter(|&c| self.is_free(c));
        match target {
            Some(cell) if cell == self.goal => Ok(StepOutcome {
                next_state: cell,
                reward: GOAL_REWARD,
                terminal: true,
            }),
            Some(cell) => Ok(StepOutcome {
                next_state: cell,
                reward: STEP_REWARD,
                terminal: false,
            }),
            None => Ok(StepOutcome {
                next_state: state,
                reward: STEP_REWARD,
                terminal: false,
            }),
        }
    }

    /// Breadth-first shortest path length in moves between two free cells,
    /// or `None` when unreachable.
    pub fn shortest_path_len(&self, from: Cell, to: Cell) -> Option<usize> {
        if self.is_blocked(from) || self.is_blocked(to) {
            return None;
        }
        let mut dist = vec![usize::MAX; GRID_SIZE * GRID_SIZE];
        let mut queue = VecDeque::new();
        dist[cell_index(from)] = 0;
        queue.push_back(from);
        while let Some(cell) = queue.pop_front() {
            if cell == to {
                return Some(dist[cell_index(cell)]);
            }
            for action in Action::ALL {
                if let Some(next) = neighbor(cell, action).filter(|&c| self.is_free(c)) {
                    if dist[cell_index(next)] == usize::MAX {
                        dist[cell_index(next)] = dist[cell_index(cell)] + 1;
                        queue.push_back(next);
                    }
                }
            }
        }
        None
    }
}

impl Environment for GridWorld {
    type State = Cell;

    fn states(&self) -> Vec<Cell> {
        self.free_cells()
    }

    fn start_state(&self) -> Cell {
        self.start
    }

    fn action_count(&self) -> usize {
        Action::ALL.len()
    }

    fn is_terminal(&self, state: Cell) -> bool {
        state == self.goal
    }

    fn step(&self, state: Cell, action: usize) -> Result<StepOutcome<Cell>, EnvError> {
        let action = Action::from_index(action).ok_or(EnvError::InvalidAction {
            action,
            count: Action::ALL.len(),
        })?;
        self.step_action(state, action)
    }
}

fn cell_index(cell: Cell) -> usize {
    cell.row as usize * GRID_SIZE + cell.col as usize
}

fn neighbor(cell: Cell, action: Action) -> Option<Cell> {
    let (col, row) = (cell.col as i16, cell.row as i16);
    let (col, row) = match action {
        Action::Up => (col, row - 1),
        Action::Down => (col, row + 1),
        Action::Left => (col - 1, row),
        Action::Right => (col + 1, row),
    };
    let limit = GRID_SIZE as i16;
    if (0..limit).contains(&col) && (0..limit).contains(&row) {
        Some(Cell::new(col as u8, row as u8))
    } else {
        None
    }
}
