use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarKind {
    Binary,
    Continuous,
}

/// What a variable stands for. Jobs and machines are 0-based, slots 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum VarRole {
    /// Job `job` starts at `start` on `machine`.
    Start {
        job: usize,
        machine: usize,
        start: usize,
    },
    /// Some job of processing time `ptime` starts at `start` on `machine`.
    Window {
        ptime: usize,
        machine: usize,
        start: usize,
    },
    Makespan,
    Energy,
    Other,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub lower: f64,
    pub upper: f64,
    pub role: VarRole,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Defines `E` as the energy cost of the chosen starts.
    Energy,
    /// Every job starts exactly once.
    OneStart,
    /// Exactly `|J_d|` windows of each processing time.
    Cardinality,
    /// At most one job runs in each slot of each machine.
    NoOverlap,
    /// Completion times bound `Cmax` from below.
    Completion,
    /// `Cmax` does not exceed the horizon.
    HorizonCap,
    Other,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub family: Family,
    pub terms: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl Constraint {
    pub fn activity(&self, values: &[f64]) -> f64 {
        self.terms.iter().map(|&(v, a)| a * values[v]).sum()
    }

    pub fn is_satisfied(&self, values: &[f64], tol: f64) -> bool {
        let lhs = self.activity(values);
        match self.sense {
            Sense::Le => lhs <= self.rhs + tol,
            Sense::Ge => lhs >= self.rhs - tol,
            Sense::Eq => (lhs - self.rhs).abs() <= tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Formulation {
    /// One start variable per job, machine and slot.
    PerJob,
    /// One window variable per distinct processing time, machine and slot.
    PerPtime,
    /// Read from a file with no recognisable header.
    Unknown,
}

impl fmt::Display for Formulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Formulation::PerJob => "F1",
            Formulation::PerPtime => "F2",
            Formulation::Unknown => "unknown",
        })
    }
}

/// A linear model with binary and continuous variables, minimising
/// `objective`.
#[derive(Debug, Clone, PartialEq)]
pub struct MilpModel {
    pub variables: Vec<Variable>,
    pub objective: Vec<(usize, f64)>,
    pub constraints: Vec<Constraint>,
    pub formulation: Formulation,
    pub horizon: usize,
    pub reduced: bool,
}

impl MilpModel {
    pub fn n_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn n_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn rows_in(&self, family: Family) -> usize {
        self.constraints
            .iter()
            .filter(|c| c.family == family)
            .count()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    pub fn role_index(&self, role: &VarRole) -> Option<usize> {
        self.variables.iter().position(|v| &v.role == role)
    }

    pub fn binary_count(&self) -> usize {
        self.variables
            .iter()
            .filter(|v| v.kind == VarKind::Binary)
            .count()
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective.iter().map(|&(v, a)| a * values[v]).sum()
    }

    /// First constraint or bound violated by `values`, if any.
    pub fn first_violation(&self, values: &[f64], tol: f64) -> Option<String> {
        for (v, var) in self.variables.iter().enumerate() {
            let x = values[v];
            if x < var.lower - tol || x > var.upper + tol {
                return Some(format!("bound of {}", var.name));
            }
            if var.kind == VarKind::Binary && (x - x.round()).abs() > tol {
                return Some(format!("integrality of {}", var.name));
            }
        }
        self.constraints
            .iter()
            .find(|c| !c.is_satisfied(values, tol))
            .map(|c| c.name.clone())
    }

    pub fn references(&self, var: usize) -> bool {
        self.constraints
            .iter()
            .any(|c| c.terms.iter().any(|&(v, a)| v == var && a != 0.0))
    }
}
