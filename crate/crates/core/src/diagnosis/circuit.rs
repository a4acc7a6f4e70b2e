use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::DiagnosisError;
use crate::kernel::{Atom, Formula, Theory, Universe, Vocabulary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    And,
    Or,
    Not,
    Xor,
    Nand,
    Nor,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::And => "AND",
            GateKind::Or => "OR",
            GateKind::Not => "NOT",
            GateKind::Xor => "XOR",
            GateKind::Nand => "NAND",
            GateKind::Nor => "NOR",
        }
    }

    /// The gate's output as a function of its inputs. XOR with more than two
    /// inputs is parity.
    pub fn apply(self, inputs: &[bool]) -> bool {
        match self {
            GateKind::And => inputs.iter().all(|&b| b),
            GateKind::Or => inputs.iter().any(|&b| b),
            GateKind::Not => !inputs[0],
            GateKind::Xor => inputs.iter().filter(|&&b| b).count() % 2 == 1,
            GateKind::Nand => !inputs.iter().all(|&b| b),
            GateKind::Nor => !inputs.iter().any(|&b| b),
        }
    }

    /// The same function as a formula over `inputs`.
    pub fn formula(self, inputs: Vec<Formula>) -> Formula {
        match self {
            GateKind::And => Formula::conjunction(inputs),
            GateKind::Or => Formula::disjunction(inputs),
            GateKind::Not => Formula::not(inputs.into_iter().next().expect("NOT has one input")),
            GateKind::Xor => {
                let mut it = inputs.into_iter();
                let first = it.next().expect("XOR has inputs");
                it.fold(first, |acc, f| Formula::not(Formula::iff(acc, f)))
            }
            GateKind::Nand => Formula::not(Formula::conjunction(inputs)),
            GateKind::Nor => Formula::not(Formula::disjunction(inputs)),
        }
    }

    fn arity_ok(self, n: usize) -> bool {
        match self {
            GateKind::Not => n == 1,
            _ => n >= 2,
        }
    }
}

impl FromStr for GateKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "AND" => GateKind::And,
            "OR" => GateKind::Or,
            "NOT" => GateKind::Not,
            "XOR" => GateKind::Xor,
            "NAND" => GateKind::Nand,
            "NOR" => GateKind::Nor,
            _ => return Err(format!("unknown gate kind `{s}`")),
        })
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub id: String,
    pub kind: GateKind,
    pub inputs: Vec<String>,
    pub output: String,
}

impl Gate {
    pub fn new(id: &str, kind: GateKind, inputs: &[&str], output: &str) -> Self {
        Gate { id: id.into(), kind, inputs: inputs.iter().map(|s| s.to_string()).collect(), output: output.into() }
    }
}

/// A well-formed circuit: acyclic, every driven line driven by one gate.
///
/// The vocabulary lists one fault atom per gate (in gate order) followed by
/// one atom per line (in order of first mention). Gate `c3` gets fault atom
/// `f3`; any other id `g` gets `f_g`.
#[derive(Debug, Clone)]
pub struct Circuit {
    gates: Vec<Gate>,
    lines: Vec<String>,
    universe: Arc<Universe>,
}

pub(crate) fn fault_atom_name(id: &str) -> String {
    match id.strip_prefix('c') {
        Some(rest) if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) => format!("f{rest}"),
        _ => format!("f_{id}"),
    }
}

impl Circuit {
    pub fn new(gates: Vec<Gate>) -> Result<Self, DiagnosisError> {
        if gates.is_empty() {
            return Err(DiagnosisError::EmptyCircuit);
        }
        let mut lines: Vec<String> = Vec::new();
        let mut driver: HashMap<&str, usize> = HashMap::new();
        for (i, g) in gates.iter().enumerate() {
            if gates[..i].iter().any(|h| h.id == g.id) {
                return Err(DiagnosisError::DuplicateGate(g.id.clone()));
            }
            if !g.kind.arity_ok(g.inputs.len()) {
                return Err(DiagnosisError::Arity { gate: g.id.clone(), kind: g.kind, inputs: g.inputs.len() });
            }
            if driver.insert(&g.output, i).is_some() {
                return Err(DiagnosisError::MultipleDrivers(g.output.clone()));
            }
            for l in g.inputs.iter().chain(std::iter::once(&g.output)) {
                if !lines.contains(l) {
                    lines.push(l.clone());
                }
            }
        }
        // Depth-first search over "gate reads a line driven by gate" edges.
        let mut state = vec![0u8; gates.len()];
        fn visit(i: usize, gates: &[Gate], driver: &HashMap<&str, usize>, state: &mut [u8]) -> Result<(), DiagnosisError> {
            match state[i] {
                2 => return Ok(()),
                1 => return Err(DiagnosisError::CyclicCircuit(gates[i].id.clone())),
                _ => {}
            }
            state[i] = 1;
            for l in &gates[i].inputs {
                if let Some(&j) = driver.get(l.as_str()) {
                    visit(j, gates, driver, state)?;
                }
            }
            state[i] = 2;
            Ok(())
        }
        for i in 0..gates.len() {
            visit(i, &gates, &driver, &mut state)?;
        }

        let mut atoms = Vec::new();
        for g in &gates {
            atoms.push(Atom::new(&fault_atom_name(&g.id)).map_err(|_| DiagnosisError::BadName(g.id.clone()))?);
        }
        for l in &lines {
            let a = Atom::new(l).map_err(|_| DiagnosisError::BadName(l.clone()))?;
            if atoms.contains(&a) {
                return Err(DiagnosisError::NameClash(l.clone()));
            }
            atoms.push(a);
        }
        let n = gates.len();
        let line_atom = |l: &str| Formula::Atom(n + lines.iter().position(|x| x == l).expect("known line"));
        let axioms: Vec<Formula> = gates
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let ins = g.inputs.iter().map(|l| line_atom(l)).collect();
                Formula::implies(Formula::not(Formula::Atom(i)), Formula::iff(line_atom(&g.output), g.kind.formula(ins)))
            })
            .collect();
        let vocab = Vocabulary::new(atoms)?;
        let universe = Universe::new(vocab, Theory::new(axioms))?;
        Ok(Circuit { gates, lines, universe })
    }

    /// Parses `gate <id> <kind> <in...> -> <out>` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, DiagnosisError> {
        let mut gates = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |message: &str| DiagnosisError::Syntax { line: no + 1, message: message.into() };
            let words: Vec<&str> = line.split_whitespace().collect();
            if words[0] != "gate" {
                return Err(bad("expected `gate <id> <kind> <inputs...> -> <output>`"));
            }
            let arrow = words.iter().position(|w| *w == "->").ok_or_else(|| bad("missing `->`"))?;
            if arrow < 3 || words.len() != arrow + 2 {
                return Err(bad("expected `gate <id> <kind> <inputs...> -> <output>`"));
            }
            let kind: GateKind = words[2].parse().map_err(|e: String| bad(&e))?;
            gates.push(Gate::new(words[1], kind, &words[3..arrow], words[arrow + 1]));
        }
        Circuit::new(gates)
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn lines(&self) -> &[String] {
        &self.lines
    }

    /// Vocabulary (fault atoms, then line atoms) and the circuit theory.
    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn theory(&self) -> &Theory {
        self.universe.theory()
    }

    /// Lines no gate drives.
    pub fn input_lines(&self) -> Vec<&str> {
        self.lines.iter().filter(|l| !self.gates.iter().any(|g| &g.output == *l)).map(|s| s.as_str()).collect()
    }

    /// Driven lines no gate reads.
    pub fn output_lines(&self) -> Vec<&str> {
        self.lines
            .iter()
            .filter(|l| self.gates.iter().any(|g| &g.output == *l) && !self.gates.iter().any(|g| g.inputs.contains(l)))
            .map(|s| s.as_str())
            .collect()
    }

    /// Driven lines some gate reads.
    pub fn internal_lines(&self) -> Vec<&str> {
        let outputs: BTreeSet<&str> = self.output_lines().into_iter().collect();
        let inputs: BTreeSet<&str> = self.input_lines().into_iter().collect();
        self.lines.iter().map(|s| s.as_str()).filter(|l| !outputs.contains(l) && !inputs.contains(l)).collect()
    }

    /// Atom index of a line.
    pub fn line_atom(&self, line: &str) -> Option<usize> {
        self.lines.iter().position(|l| l == line).map(|i| self.gates.len() + i)
    }

    /// Parses an observation, which may only mention line atoms.
    pub fn observation(&self, text: &str) -> Result<Formula, DiagnosisError> {
        let f = self.universe.parse(text)?;
        if let Some(&a) = f.atoms().iter().find(|&&a| a < self.gates.len()) {
            return Err(DiagnosisError::FaultInObservation(self.universe.vocab().atom(a).to_string()));
        }
        Ok(f)
    }

    /// One observation per non-empty, non-comment line.
    pub fn observations(&self, text: &str) -> Result<Vec<Formula>, DiagnosisError> {
        text.lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(|l| self.observation(l))
            .collect()
    }

    pub fn to_text(&self) -> String {
        self.gates
            .iter()
            .map(|g| format!("gate {} {} {} -> {}\n", g.id, g.kind, g.inputs.join(" "), g.output))
            .collect()
    }
}
