use std::collections::HashMap;
use std::fmt::Write;

use thiserror::Error;

use super::milp::{Constraint, Family, Formulation, MilpModel, Sense, VarKind, VarRole, Variable};

const TERMS_PER_LINE: usize = 8;

fn write_terms(out: &mut String, model: &MilpModel, terms: &[(usize, f64)]) {
    if terms.is_empty() {
        out.push_str(" 0");
    }
    for (i, &(v, a)) in terms.iter().enumerate() {
        if i > 0 && i % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let sign = if a < 0.0 { '-' } else { '+' };
        let mag = a.abs();
        let name = &model.variables[v].name;
        if i == 0 && sign == '+' {
            if mag == 1.0 {
                let _ = write!(out, " {name}");
            } else {
                let _ = write!(out, " {mag} {name}");
            }
        } else if mag == 1.0 {
            let _ = write!(out, " {sign} {name}");
        } else {
            let _ = write!(out, " {sign} {mag} {name}");
        }
    }
}

/// Writes the model in CPLEX LP format. Output depends only on the model.
pub fn export_lp(model: &MilpModel) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "\\ formulation {} horizon {} reduced {}",
        model.formulation, model.horizon, model.reduced
    );
    out.push_str("Minimize\n obj:");
    write_terms(&mut out, model, &model.objective);
    out.push_str("\nSubject To\n");
    for c in &model.constraints {
        let _ = write!(out, " {}:", c.name);
        write_terms(&mut out, model, &c.terms);
        let _ = writeln!(out, " {} {}", c.sense.symbol(), c.rhs);
    }
    out.push_str("Bounds\n");
    for v in &model.variables {
        match v.kind {
            VarKind::Binary if v.upper == 0.0 => {
                let _ = writeln!(out, " {} = 0", v.name);
            }
            VarKind::Binary => {}
            VarKind::Continuous => {
                if v.upper.is_finite() {
                    let _ = writeln!(out, " {} <= {} <= {}", v.lower, v.name, v.upper);
                } else if v.lower.is_finite() {
                    let _ = writeln!(out, " {} >= {}", v.name, v.lower);
                } else {
                    let _ = writeln!(out, " {} free", v.name);
                }
            }
        }
    }
    out.push_str("Binary\n");
    for v in model.variables.iter().filter(|v| v.kind == VarKind::Binary) {
        let _ = writeln!(out, " {}", v.name);
    }
    out.push_str("End\n");
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing section {0}")]
    MissingSection(&'static str),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Preamble,
    Objective,
    Constraints,
    Bounds,
    Binary,
    End,
}

fn role_of(name: &str) -> VarRole {
    let parts: Vec<&str> = name.split('_').collect();
    let nums: Option<Vec<usize>> = parts.iter().skip(1).map(|s| s.parse().ok()).collect();
    match (parts[0], nums.as_deref()) {
        ("x", Some(&[job, machine, start])) => VarRole::Start {
            job,
            machine,
            start,
        },
        ("y", Some(&[ptime, machine, start])) => VarRole::Window {
            ptime,
            machine,
            start,
        },
        ("Cmax", _) if parts.len() == 1 => VarRole::Makespan,
        ("E", _) if parts.len() == 1 => VarRole::Energy,
        _ => VarRole::Other,
    }
}

fn family_of(name: &str) -> Family {
    match name.split('_').next().unwrap_or("") {
        "energy" => Family::Energy,
        "start" => Family::OneStart,
        "card" => Family::Cardinality,
        "overlap" => Family::NoOverlap,
        "compl" => Family::Completion,
        "cmax" => Family::HorizonCap,
        _ => Family::Other,
    }
}

struct Builder {
    variables: Vec<Variable>,
    by_name: HashMap<String, usize>,
}

impl Builder {
    fn var(&mut self, name: &str) -> usize {
        if let Some(&i) = self.by_name.get(name) {
            return i;
        }
        let i = self.variables.len();
        self.variables.push(Variable {
            name: name.to_string(),
            kind: VarKind::Continuous,
            lower: 0.0,
            upper: f64::INFINITY,
            role: role_of(name),
        });
        self.by_name.insert(name.to_string(), i);
        i
    }
}

fn number(tok: &str) -> Option<f64> {
    match tok {
        "inf" | "+inf" | "infinity" | "+infinity" => Some(f64::INFINITY),
        "-inf" | "-infinity" => Some(f64::NEG_INFINITY),
        _ => tok.parse().ok(),
    }
}

fn sense_of(tok: &str) -> Option<Sense> {
    match tok {
        "<=" | "=<" | "<" => Some(Sense::Le),
        ">=" | "=>" | ">" => Some(Sense::Ge),
        "=" => Some(Sense::Eq),
        _ => None,
    }
}

/// Parses a linear expression `[+|-] [coef] name ...` from tokens.
fn parse_terms(
    tokens: &[(usize, String)],
    builder: &mut Builder,
) -> Result<Vec<(usize, f64)>, LpParseError> {
    let mut terms = Vec::new();
    let mut sign = 1.0;
    let mut coef: Option<f64> = None;
    for (line, tok) in tokens {
        match tok.as_str() {
            "+" => {}
            "-" => sign = -sign,
            _ => {
                if let Some(x) = number(tok) {
                    if coef.is_some() {
                        return Err(LpParseError::Syntax {
                            line: *line,
                            message: format!("two coefficients in a row at '{tok}'"),
                        });
                    }
                    coef = Some(x);
                } else {
                    let v = builder.var(tok);
                    let a = sign * coef.unwrap_or(1.0);
                    if a != 0.0 || coef.is_some() {
                        terms.push((v, a));
                    }
                    sign = 1.0;
                    coef = None;
                }
            }
        }
    }
    if coef.is_some_and(|c| c != 0.0) {
        let line = tokens.last().map_or(0, |t| t.0);
        return Err(LpParseError::Syntax {
            line,
            message: "constant terms are not supported".into(),
        });
    }
    Ok(terms)
}

fn tokenize(line: &str) -> Vec<String> {
    let mut spaced = String::with_capacity(line.len() + 8);
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        if two == "<=" || two == ">=" || two == "=<" || two == "=>" {
            spaced.push(' ');
            spaced.push_str(&two);
            spaced.push(' ');
            i += 2;
            continue;
        }
        let prev_is_exp =
            i > 0 && matches!(chars[i - 1], 'e' | 'E') && i > 1 && chars[i - 2].is_ascii_digit();
        if matches!(c, '+' | '-') && !prev_is_exp || matches!(c, '<' | '>' | '=' | ':') {
            spaced.push(' ');
            spaced.push(c);
            spaced.push(' ');
        } else {
            spaced.push(c);
        }
        i += 1;
    }
    spaced.split_whitespace().map(str::to_string).collect()
}

/// Reads the subset of the LP format produced by [`export_lp`].
pub fn import_lp(text: &str) -> Result<MilpModel, LpParseError> {
    let mut builder = Builder {
        variables: Vec::new(),
        by_name: HashMap::new(),
    };
    let mut formulation = Formulation::Unknown;
    let mut horizon = 0;
    let mut reduced = false;
    let mut section = Section::Preamble;
    let mut objective_tokens: Vec<(usize, String)> = Vec::new();
    let mut constraint_tokens: Vec<(usize, String)> = Vec::new();
    let mut bound_lines: Vec<(usize, Vec<String>)> = Vec::new();
    let mut binaries: Vec<String> = Vec::new();
    let mut seen_constraints = false;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let trimmed = raw.trim();
        if let Some(comment) = trimmed.strip_prefix('\\') {
            let words: Vec<&str> = comment.split_whitespace().collect();
            if let ["formulation", f, "horizon", k, "reduced", r] = words.as_slice() {
                formulation = match *f {
                    "F1" => Formulation::PerJob,
                    "F2" => Formulation::PerPtime,
                    _ => Formulation::Unknown,
                };
                horizon = k.parse().unwrap_or(0);
                reduced = *r == "true";
            }
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        match trimmed.to_ascii_lowercase().as_str() {
            "minimize" | "minimum" | "min" => {
                section = Section::Objective;
                continue;
            }
            "subject to" | "such that" | "st" | "s.t." => {
                section = Section::Constraints;
                seen_constraints = true;
                continue;
            }
            "bounds" => {
                section = Section::Bounds;
                continue;
            }
            "binary" | "binaries" | "bin" => {
                section = Section::Binary;
                continue;
            }
            "end" => {
                section = Section::End;
                continue;
            }
            _ => {}
        }
        let tokens = tokenize(trimmed);
        match section {
            Section::Preamble => {
                return Err(LpParseError::Syntax {
                    line: line_no,
                    message: format!("unexpected '{trimmed}' before Minimize"),
                })
            }
            Section::Objective => objective_tokens.extend(tokens.into_iter().map(|t| (line_no, t))),
            Section::Constraints => {
                constraint_tokens.extend(tokens.into_iter().map(|t| (line_no, t)))
            }
            Section::Bounds => bound_lines.push((line_no, tokens)),
            Section::Binary => binaries.extend(tokens),
            Section::End => {}
        }
    }
    if !seen_constraints {
        return Err(LpParseError::MissingSection("Subject To"));
    }

    // declared variables first, so imported indices follow the file's order
    for name in binaries {
        let v = builder.var(&name);
        let var = &mut builder.variables[v];
        var.kind = VarKind::Binary;
        var.upper = 1.0;
    }
    for (line, tokens) in bound_lines {
        let bad = || LpParseError::Syntax {
            line,
            message: format!("unsupported bound '{}'", tokens.join(" ")),
        };
        let signed = |toks: &[String]| -> Option<(f64, usize)> {
            match toks.first()?.as_str() {
                "-" => Some((-number(toks.get(1)?)?, 2)),
                "+" => Some((number(toks.get(1)?)?, 2)),
                t => Some((number(t)?, 1)),
            }
        };
        if tokens.len() == 2 && tokens[1].eq_ignore_ascii_case("free") {
            let v = builder.var(&tokens[0]);
            builder.variables[v].lower = f64::NEG_INFINITY;
            builder.variables[v].upper = f64::INFINITY;
            continue;
        }
        if let Some((lo, used)) = signed(&tokens) {
            // lo <= name [<= hi]
            let rest = &tokens[used..];
            if rest.len() < 2 || sense_of(&rest[0]) != Some(Sense::Le) {
                return Err(bad());
            }
            let v = builder.var(&rest[1]);
            builder.variables[v].lower = lo;
            if rest.len() > 2 {
                if sense_of(&rest[2]) != Some(Sense::Le) {
                    return Err(bad());
                }
                let (hi, _) = signed(&rest[3..]).ok_or_else(bad)?;
                builder.variables[v].upper = hi;
            }
            continue;
        }
        if tokens.len() < 3 {
            return Err(bad());
        }
        let v = builder.var(&tokens[0]);
        let sense = sense_of(&tokens[1]).ok_or_else(bad)?;
        let (x, _) = signed(&tokens[2..]).ok_or_else(bad)?;
        let var = &mut builder.variables[v];
        match sense {
            Sense::Le => var.upper = x,
            Sense::Ge => var.lower = x,
            Sense::Eq => {
                var.lower = x;
                var.upper = x;
            }
        }
    }

    if objective_tokens.len() >= 2 && objective_tokens[1].1 == ":" {
        objective_tokens.drain(..2);
    }
    let objective = parse_terms(&objective_tokens, &mut builder)?;

    let mut constraints = Vec::new();
    let mut pos = 0;
    while pos < constraint_tokens.len() {
        let line = constraint_tokens[pos].0;
        let mut name = format!("r{}", constraints.len());
        if pos + 1 < constraint_tokens.len() && constraint_tokens[pos + 1].1 == ":" {
            name = constraint_tokens[pos].1.clone();
            pos += 2;
        }
        let sense_at = constraint_tokens[pos..]
            .iter()
            .position(|(_, t)| sense_of(t).is_some())
            .map(|o| pos + o)
            .ok_or_else(|| LpParseError::Syntax {
                line,
                message: format!("constraint '{name}' has no relation"),
            })?;
        let terms = parse_terms(&constraint_tokens[pos..sense_at], &mut builder)?;
        let sense = sense_of(&constraint_tokens[sense_at].1).unwrap();
        let mut rhs_pos = sense_at + 1;
        let mut rhs_sign = 1.0;
        while rhs_pos < constraint_tokens.len()
            && matches!(constraint_tokens[rhs_pos].1.as_str(), "+" | "-")
        {
            if constraint_tokens[rhs_pos].1 == "-" {
                rhs_sign = -rhs_sign;
            }
            rhs_pos += 1;
        }
        let rhs = constraint_tokens
            .get(rhs_pos)
            .and_then(|(_, t)| number(t))
            .ok_or_else(|| LpParseError::Syntax {
                line,
                message: format!("constraint '{name}' has no right-hand side"),
            })?;
        constraints.push(Constraint {
            family: family_of(&name),
            name,
            terms,
            sense,
            rhs: rhs_sign * rhs,
        });
        pos = rhs_pos + 1;
    }

    Ok(MilpModel {
        variables: builder.variables,
        objective,
        constraints,
        formulation,
        horizon,
        reduced,
    })
}
