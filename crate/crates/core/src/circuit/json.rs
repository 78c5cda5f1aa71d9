use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Circuit, CircuitError, DenseMatrix, Gate, Instruction, Locus, Phase, QubitLayout};

/// Wire form of a [`Circuit`]. Field order is fixed so dumps diff cleanly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CircuitDocument {
    pub qubits: usize,
    pub layout: QubitLayout,
    pub instructions: Vec<InstructionRecord>,
    #[serde(default)]
    pub phases: Vec<Phase>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstructionRecord {
    pub gate: String,
    pub controls: Vec<usize>,
    pub targets: Vec<usize>,
    pub locus: Locus,
    /// Row-major `[re, im]` entries, CTRL-UNITARY only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<[f64; 2]>>,
}

impl From<&Instruction> for InstructionRecord {
    fn from(ins: &Instruction) -> Self {
        let (controls, targets, matrix) = match &ins.gate {
            Gate::X(q) | Gate::Z(q) => (vec![], vec![*q], None),
            Gate::Cnot { control, target } => (vec![*control], vec![*target], None),
            Gate::Swap(a, b) => (vec![], vec![*a, *b], None),
            Gate::Mcx { controls, target } => (controls.clone(), vec![*target], None),
            Gate::CtrlUnitary {
                control,
                targets,
                matrix,
            } => (
                vec![*control],
                targets.clone(),
                Some(matrix.data().iter().map(|z| [z.re, z.im]).collect()),
            ),
        };
        InstructionRecord {
            gate: ins.gate.name().to_string(),
            controls,
            targets,
            locus: ins.locus,
            matrix,
        }
    }
}

impl InstructionRecord {
    fn into_instruction(self, idx: usize) -> Result<Instruction, CircuitError> {
        let bad = |what: &str| {
            CircuitError::Malformed(format!("instruction {idx} ({}): {what}", self.gate))
        };
        let arity = |controls: usize, targets: usize| {
            if self.controls.len() != controls || self.targets.len() != targets {
                Err(bad(&format!(
                    "expected {controls} controls and {targets} targets"
                )))
            } else {
                Ok(())
            }
        };
        if self.matrix.is_some() && self.gate != "CTRL-UNITARY" {
            return Err(bad("only CTRL-UNITARY carries a matrix"));
        }
        let gate = match self.gate.as_str() {
            "X" => {
                arity(0, 1)?;
                Gate::X(self.targets[0])
            }
            "Z" => {
                arity(0, 1)?;
                Gate::Z(self.targets[0])
            }
            "CNOT" => {
                arity(1, 1)?;
                Gate::Cnot {
                    control: self.controls[0],
                    target: self.targets[0],
                }
            }
            "SWAP" => {
                arity(0, 2)?;
                Gate::Swap(self.targets[0], self.targets[1])
            }
            "MCX" => {
                if self.targets.len() != 1 {
                    return Err(bad("expected one target"));
                }
                Gate::Mcx {
                    controls: self.controls.clone(),
                    target: self.targets[0],
                }
            }
            "CTRL-UNITARY" => {
                if self.controls.len() != 1 {
                    return Err(bad("expected one control"));
                }
                let entries = self.matrix.as_ref().ok_or_else(|| bad("missing matrix"))?;
                let dim = 1usize
                    .checked_shl(self.targets.len() as u32)
                    .ok_or_else(|| bad("too many targets"))?;
                let data = entries
                    .iter()
                    .map(|&[re, im]| Complex64::new(re, im))
                    .collect();
                let matrix = DenseMatrix::new(dim, data).map_err(|e| bad(&e.to_string()))?;
                Gate::CtrlUnitary {
                    control: self.controls[0],
                    targets: self.targets.clone(),
                    matrix,
                }
            }
            _ => return Err(bad("unknown gate")),
        };
        Ok(Instruction::new(gate, self.locus))
    }
}

impl From<&Circuit> for CircuitDocument {
    fn from(c: &Circuit) -> Self {
        CircuitDocument {
            qubits: c.qubit_count(),
            layout: c.layout.clone(),
            instructions: c.instructions.iter().map(InstructionRecord::from).collect(),
            phases: c.phases.clone(),
        }
    }
}

impl CircuitDocument {
    pub fn into_circuit(self) -> Result<Circuit, CircuitError> {
        if self.qubits != self.layout.qubit_count() {
            return Err(CircuitError::Malformed(format!(
                "qubit count {} does not match layout ({})",
                self.qubits,
                self.layout.qubit_count()
            )));
        }
        let instructions = self
            .instructions
            .into_iter()
            .enumerate()
            .map(|(i, r)| r.into_instruction(i))
            .collect::<Result<Vec<_>, _>>()?;
        for p in &self.phases {
            if p.start > p.end || p.end > instructions.len() {
                return Err(CircuitError::Malformed(format!(
                    "phase range {}..{} outside {} instructions",
                    p.start,
                    p.end,
                    instructions.len()
                )));
            }
        }
        Ok(Circuit {
            layout: self.layout,
            instructions,
            phases: self.phases,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::compile_step;
    use crate::graph::{path, star, PolarityMap};

    #[test]
    fn round_trip() {
        let g = star(3);
        let c = compile_step(&g, &PolarityMap::greedy(&g), &[1]).unwrap();
        let text = c.to_json();
        let back = Circuit::from_json(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn k2_document_shape() {
        let g = path(2);
        let c = compile_step(&g, &PolarityMap::greedy(&g), &[0]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&c.to_json()).unwrap();
        assert_eq!(v["qubits"], 4);
        assert_eq!(v["instructions"][0]["gate"], "Z");
        assert_eq!(v["instructions"][0]["locus"]["kind"], "edge");
        assert_eq!(v["instructions"][0]["locus"]["id"], 0);
        assert_eq!(v["instructions"][2]["gate"], "SWAP");
        assert_eq!(v["phases"][0]["kind"], "oracle");
        let text = c.to_json();
        let pos: Vec<_> = ["\"qubits\"", "\"layout\"", "\"instructions\"", "\"phases\""]
            .iter()
            .map(|k| text.find(k).unwrap())
            .collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejects_malformed() {
        let g = path(2);
        let c = compile_step(&g, &PolarityMap::greedy(&g), &[0]).unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&c.to_json()).unwrap();
        v["instructions"][0]["gate"] = "H".into();
        assert!(matches!(
            Circuit::from_json(&v.to_string()),
            Err(CircuitError::Malformed(_))
        ));
        v["instructions"][0]["gate"] = "CNOT".into();
        assert!(Circuit::from_json(&v.to_string()).is_err());
        assert!(Circuit::from_json("{").is_err());
    }
}
