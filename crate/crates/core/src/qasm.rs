//! OpenQASM-2 subset export and import (h, s, sdg, x, y, z, cx, rz, rx, ry).
//!
//! Symbolic rotation angles are emitted as named parameters like
//! `0.5*theta_3` with the rotation metadata (target index, folded sign) in a
//! JSON sidecar, since plain QASM 2 cannot carry either.

use serde::{Deserialize, Serialize};

use crate::circuit::{Angle, Circuit, Gate, Op, Rotation};
use crate::error::{Error, Result};
use crate::pauli::Axis;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RotationMeta {
    /// Ordinal of the rotation within the circuit.
    pub index: usize,
    pub implements: usize,
    pub sign: i8,
    pub angle: Angle,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct Sidecar {
    pub rotations: Vec<RotationMeta>,
}

pub fn export(circuit: &Circuit) -> (String, Sidecar) {
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    out.push_str(&format!("qreg q[{}];\n", circuit.n));
    let mut sidecar = Sidecar::default();
    let mut ordinal = 0usize;
    for op in &circuit.ops {
        match op {
            Op::Gate(g) => out.push_str(&match *g {
                Gate::H(q) => format!("h q[{q}];\n"),
                Gate::S(q) => format!("s q[{q}];\n"),
                Gate::Sdg(q) => format!("sdg q[{q}];\n"),
                Gate::X(q) => format!("x q[{q}];\n"),
                Gate::Y(q) => format!("y q[{q}];\n"),
                Gate::Z(q) => format!("z q[{q}];\n"),
                Gate::Cnot(c, t) => format!("cx q[{c}],q[{t}];\n"),
            }),
            Op::Rotation(r) => {
                let name = match r.axis {
                    Axis::Z => "rz",
                    Axis::X => "rx",
                    Axis::Y => "ry",
                };
                let angle = match r.angle {
                    Angle::Literal(v) => format!("{:?}", v * f64::from(r.sign)),
                    Angle::Symbolic { index, scale } => {
                        format!("{:?}*theta_{index}", scale * f64::from(r.sign))
                    }
                };
                out.push_str(&format!("{name}({angle}) q[{}];\n", r.qubit));
                sidecar.rotations.push(RotationMeta {
                    index: ordinal,
                    implements: r.implements,
                    sign: r.sign,
                    angle: r.angle,
                });
                ordinal += 1;
            }
        }
    }
    (out, sidecar)
}

/// Parse circuits produced by [`export`]. Without a sidecar, rotations get
/// sign +1, the parsed angle expression, and sequential `implements` tags.
pub fn parse(text: &str, sidecar: Option<&Sidecar>) -> Result<Circuit> {
    let mut n = None;
    let mut ops: Vec<Op> = Vec::new();
    let mut ordinal = 0usize;
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let err = |reason: &str| Error::QasmParse {
            line: ln + 1,
            reason: reason.to_string(),
        };
        if line.is_empty()
            || line.starts_with("//")
            || line.starts_with("OPENQASM")
            || line.starts_with("include")
        {
            continue;
        }
        let line = line.strip_suffix(';').ok_or_else(|| err("missing semicolon"))?;
        if let Some(rest) = line.strip_prefix("qreg") {
            let inner = rest
                .trim()
                .strip_prefix("q[")
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| err("bad qreg"))?;
            n = Some(inner.parse::<usize>().map_err(|_| err("bad qreg size"))?);
            continue;
        }
        let n_val = n.ok_or_else(|| err("gate before qreg"))?;
        let (head, args) = line.split_once(' ').ok_or_else(|| err("missing operands"))?;
        let qubits: Vec<usize> = args
            .split(',')
            .map(|a| {
                a.trim()
                    .strip_prefix("q[")
                    .and_then(|s| s.strip_suffix(']'))
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| err("bad qubit operand"))
            })
            .collect::<Result<_>>()?;
        if qubits.iter().any(|&q| q >= n_val) {
            return Err(err("qubit out of range"));
        }
        let gate_of = |name: &str, q: usize| -> Option<Gate> {
            Some(match name {
                "h" => Gate::H(q),
                "s" => Gate::S(q),
                "sdg" => Gate::Sdg(q),
                "x" => Gate::X(q),
                "y" => Gate::Y(q),
                "z" => Gate::Z(q),
                _ => return None,
            })
        };
        if head == "cx" {
            if qubits.len() != 2 {
                return Err(err("cx needs two operands"));
            }
            ops.push(Op::Gate(Gate::Cnot(qubits[0], qubits[1])));
        } else if let Some(g) = gate_of(head, *qubits.first().ok_or_else(|| err("missing qubit"))?) {
            ops.push(Op::Gate(g));
        } else if let Some((name, expr)) = head.split_once('(') {
            let axis = match name {
                "rz" => Axis::Z,
                "rx" => Axis::X,
                "ry" => Axis::Y,
                _ => return Err(err("unknown gate")),
            };
            let expr = expr.strip_suffix(')').ok_or_else(|| err("bad angle"))?;
            let meta = sidecar.and_then(|s| s.rotations.iter().find(|r| r.index == ordinal));
            let (angle, sign, implements) = match meta {
                Some(m) => (m.angle, m.sign, m.implements),
                None => (parse_angle(expr).ok_or_else(|| err("bad angle expression"))?, 1, ordinal),
            };
            ops.push(Op::Rotation(Rotation {
                axis,
                qubit: qubits[0],
                angle,
                sign,
                implements,
            }));
            ordinal += 1;
        } else {
            return Err(err("unknown gate"));
        }
    }
    let n = n.ok_or_else(|| Error::QasmParse {
        line: 0,
        reason: "no qreg declaration".into(),
    })?;
    Ok(Circuit { n, ops })
}

fn parse_angle(expr: &str) -> Option<Angle> {
    if let Some((scale, theta)) = expr.split_once('*') {
        let scale: f64 = scale.parse().ok()?;
        let index: usize = theta.strip_prefix("theta_")?.parse().ok()?;
        Some(Angle::Symbolic { index, scale })
    } else {
        expr.parse().ok().map(Angle::Literal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_with_sidecar() {
        let mut c = Circuit::new(3);
        c.push_gate(Gate::H(0));
        c.push_gate(Gate::Cnot(0, 2));
        c.push_rotation(Rotation {
            axis: Axis::Z,
            qubit: 2,
            angle: Angle::Symbolic { index: 4, scale: -0.125 },
            sign: -1,
            implements: 4,
        });
        c.push_gate(Gate::Sdg(1));
        c.push_rotation(Rotation {
            axis: Axis::X,
            qubit: 1,
            angle: Angle::Literal(0.75),
            sign: 1,
            implements: 0,
        });
        let (text, sidecar) = export(&c);
        let back = parse(&text, Some(&sidecar)).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn parse_without_sidecar_keeps_angles() {
        let text = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\nh q[0];\nrz(0.5) q[1];\nrz(2.0*theta_1) q[0];\n";
        let c = parse(text, None).unwrap();
        assert_eq!(c.n, 2);
        assert_eq!(c.rotations().count(), 2);
        let angles: Vec<Angle> = c.rotations().map(|r| r.angle).collect();
        assert_eq!(angles[0], Angle::Literal(0.5));
        assert_eq!(angles[1], Angle::Symbolic { index: 1, scale: 2.0 });
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "OPENQASM 2.0;\nqreg q[2];\nfoo q[0];\n";
        match parse(text, None) {
            Err(Error::QasmParse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
