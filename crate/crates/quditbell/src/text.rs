//! Line-oriented circuit text.
//!
//! ```text
//! # phase readout, d = 3, n = 2
//! DIM 3
//! SYSTEM 2
//! ANCILLA 1
//! H 3 2
//! CSUM 3 2 0
//! CSUM 3 2 1
//! HDAG 3 2
//! ```
//!
//! Header lines `DIM d`, `SYSTEM n` and `ANCILLA k` come first, in any
//! order. Every other non-blank line is one step, `GATE d wires…`, where `d`
//! repeats the circuit dimension. `Z` and `X` take an optional power
//! (`Z^2`). `CU` steps carry their payload matrix after a `:` as row-major
//! `re im` pairs. Text after `#` is ignored. Wires are 0-based; ancillas
//! follow the system wires.

use std::fmt::Write as _;

use quditbell_core::Complex64;
use quditbell_core::{Circuit, DenseOperator, Gate};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing {0} header")]
    MissingHeader(&'static str),
    #[error("line {line}: {source}")]
    Circuit {
        line: usize,
        source: quditbell_core::Error,
    },
}

/// Renders `circuit` in the text form. Floats use the shortest
/// representation that reads back to the same value.
pub fn write_circuit(circuit: &Circuit) -> String {
    let d = circuit.dim();
    let mut out = String::new();
    let _ = writeln!(out, "DIM {d}");
    let _ = writeln!(out, "SYSTEM {}", circuit.system_wires());
    let _ = writeln!(out, "ANCILLA {}", circuit.ancilla_count());
    for step in circuit.steps() {
        let _ = write!(out, "{} {d}", step.gate);
        for w in &step.wires {
            let _ = write!(out, " {w}");
        }
        if let Gate::Controlled(u) = &step.gate {
            out.push_str(" :");
            for z in u.entries() {
                let _ = write!(out, " {:?} {:?}", z.re, z.im);
            }
        }
        out.push('\n');
    }
    out
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        msg: msg.into(),
    }
}

fn number<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T, ParseError> {
    tok.parse()
        .map_err(|_| syntax(line, format!("bad {what} {tok:?}")))
}

pub fn parse_circuit(text: &str) -> Result<Circuit, ParseError> {
    let (mut dim, mut system, mut ancilla) = (None, None, None);
    let mut circuit: Option<Circuit> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (head, payload) = match body.split_once(':') {
            Some((h, p)) => (h, Some(p)),
            None => (body, None),
        };
        let mut toks = head.split_whitespace();
        let name = toks.next().expect("non-empty line");
        let header = match name {
            "DIM" => Some(&mut dim),
            "SYSTEM" => Some(&mut system),
            "ANCILLA" => Some(&mut ancilla),
            _ => None,
        };
        if let Some(slot) = header {
            if circuit.is_some() {
                return Err(syntax(line, format!("{name} after the first step")));
            }
            let value = toks
                .next()
                .ok_or_else(|| syntax(line, format!("{name} needs a value")))?;
            if toks.next().is_some() || payload.is_some() {
                return Err(syntax(line, format!("trailing text after {name}")));
            }
            if slot
                .replace(number::<usize>(line, value, "count")?)
                .is_some()
            {
                return Err(syntax(line, format!("repeated {name}")));
            }
            continue;
        }

        if circuit.is_none() {
            let d = dim.ok_or(ParseError::MissingHeader("DIM"))?;
            let n = system.ok_or(ParseError::MissingHeader("SYSTEM"))?;
            let k = ancilla.ok_or(ParseError::MissingHeader("ANCILLA"))?;
            circuit =
                Some(Circuit::new(d, n, k).map_err(|source| ParseError::Circuit { line, source })?);
        }
        let c = circuit.as_mut().expect("created above");
        let d: usize = number(
            line,
            toks.next()
                .ok_or_else(|| syntax(line, "missing dimension"))?,
            "dimension",
        )?;
        if d != c.dim() {
            return Err(syntax(
                line,
                format!("dimension {d} differs from DIM {}", c.dim()),
            ));
        }
        let wires = toks
            .map(|t| number::<usize>(line, t, "wire"))
            .collect::<Result<Vec<_>, _>>()?;
        let gate = parse_gate(line, name, d, wires.len(), payload)?;
        c.push(gate, wires)
            .map_err(|source| ParseError::Circuit { line, source })?;
    }
    match circuit {
        Some(c) => Ok(c),
        None => {
            let d = dim.ok_or(ParseError::MissingHeader("DIM"))?;
            let n = system.ok_or(ParseError::MissingHeader("SYSTEM"))?;
            let k = ancilla.ok_or(ParseError::MissingHeader("ANCILLA"))?;
            Circuit::new(d, n, k).map_err(|source| ParseError::Circuit { line: 0, source })
        }
    }
}

fn parse_gate(
    line: usize,
    name: &str,
    d: usize,
    wire_count: usize,
    payload: Option<&str>,
) -> Result<Gate, ParseError> {
    let (base, power) = match name.split_once('^') {
        Some((b, p)) => (b, Some(number::<usize>(line, p, "power")?)),
        None => (name, None),
    };
    if power.is_some() && !matches!(base, "Z" | "X") {
        return Err(syntax(line, format!("{base} takes no power")));
    }
    if payload.is_some() && base != "CU" {
        return Err(syntax(line, format!("{base} takes no payload")));
    }
    let power = power.unwrap_or(1);
    Ok(match base {
        "Z" => Gate::Z { power },
        "X" => Gate::X { power },
        "H" => Gate::H,
        "HDAG" => Gate::HDag,
        "CSUM" => Gate::CSum,
        "CSUMDAG" => Gate::CSumDag,
        "CU" => {
            let payload = payload.ok_or_else(|| syntax(line, "CU needs a ':' payload"))?;
            let values = payload
                .split_whitespace()
                .map(|t| number::<f64>(line, t, "matrix entry"))
                .collect::<Result<Vec<_>, _>>()?;
            if values.len() % 2 != 0 {
                return Err(syntax(line, "odd number of matrix reals"));
            }
            let entries = values
                .chunks(2)
                .map(|c| Complex64::new(c[0], c[1]))
                .collect();
            let arity = wire_count
                .checked_sub(1)
                .filter(|&a| a > 0)
                .ok_or_else(|| syntax(line, "CU needs an ancilla and at least one wire"))?;
            Gate::Controlled(
                DenseOperator::new(d, arity, entries)
                    .map_err(|source| ParseError::Circuit { line, source })?,
            )
        }
        other => return Err(syntax(line, format!("unknown gate {other:?}"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use quditbell_core::discriminator::{build_parity_circuit, build_phase_circuit};
    use quditbell_core::gates::xd_matrix;
    use quditbell_core::outsourcing::decompose_controlled_u;

    #[test]
    fn phase_circuit_text() {
        let c = build_phase_circuit(3, 2).unwrap();
        let text = write_circuit(&c);
        assert_eq!(
            text,
            "DIM 3\nSYSTEM 2\nANCILLA 1\nH 3 2\nCSUM 3 2 0\nCSUM 3 2 1\nHDAG 3 2\n"
        );
        assert_eq!(parse_circuit(&text).unwrap(), c);
    }

    #[test]
    fn round_trips() {
        let mut c = build_parity_circuit(4, 3, (0, 2)).unwrap();
        c.push(Gate::Z { power: 3 }, vec![1]).unwrap();
        c.push(Gate::X { power: 0 }, vec![3]).unwrap();
        assert_eq!(parse_circuit(&write_circuit(&c)).unwrap(), c);

        let x = xd_matrix(3).unwrap();
        let cu = decompose_controlled_u(&[x.clone(), x]).unwrap();
        assert_eq!(parse_circuit(&write_circuit(&cu)).unwrap(), cu);
    }

    #[test]
    fn comments_and_blank_lines() {
        let c =
            parse_circuit("# hi\n\nANCILLA 0\nSYSTEM 2\nDIM 2   # qubits\nCSUM 2 0 1\n").unwrap();
        assert_eq!(c.steps().len(), 1);
        assert_eq!(c.total_wires(), 2);
        let empty = parse_circuit("DIM 2\nSYSTEM 1\nANCILLA 0\n").unwrap();
        assert!(empty.steps().is_empty());
    }

    #[test]
    fn rejects_malformed_input() {
        let head = "DIM 3\nSYSTEM 2\nANCILLA 1\n";
        let bad = [
            (
                "SYSTEM 2\nANCILLA 1\nH 3 0\n",
                ParseError::MissingHeader("DIM"),
            ),
            (
                &*format!("{head}H 2 0\n"),
                syntax(4, "dimension 2 differs from DIM 3"),
            ),
            (
                &*format!("{head}FOO 3 0\n"),
                syntax(4, "unknown gate \"FOO\""),
            ),
            (&*format!("{head}H^2 3 0\n"), syntax(4, "H takes no power")),
            (
                &*format!("{head}CU 3 2 0\n"),
                syntax(4, "CU needs a ':' payload"),
            ),
            (
                &*format!("{head}CU 3 2 0 : 1 0 0\n"),
                syntax(4, "odd number of matrix reals"),
            ),
            (&*format!("{head}H 3 x\n"), syntax(4, "bad wire \"x\"")),
            ("DIM 3\nDIM 3\n", syntax(2, "repeated DIM")),
        ];
        for (text, want) in bad {
            assert_eq!(parse_circuit(text).unwrap_err(), want, "{text}");
        }
        assert!(matches!(
            parse_circuit(&format!("{head}CSUM 3 0 5\n")),
            Err(ParseError::Circuit { line: 4, .. })
        ));
        assert!(matches!(
            parse_circuit(&format!("{head}H 3 0\nDIM 3\n")),
            Err(ParseError::Syntax { line: 5, .. })
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn gate() -> impl Strategy<Value = (Gate, usize)> {
            prop_oneof![
                (0usize..9).prop_map(|p| (Gate::Z { power: p }, 1)),
                (0usize..9).prop_map(|p| (Gate::X { power: p }, 1)),
                Just((Gate::H, 1)),
                Just((Gate::HDag, 1)),
                Just((Gate::CSum, 2)),
                Just((Gate::CSumDag, 2)),
            ]
        }

        proptest! {
            #[test]
            fn write_then_parse_is_identity(
                d in 2usize..6,
                system in 1usize..4,
                ancillas in 0usize..3,
                steps in prop::collection::vec((gate(), any::<u64>()), 0..12),
            ) {
                let total = system + ancillas;
                let mut c = Circuit::new(d, system, ancillas).unwrap();
                for ((g, arity), pick) in steps {
                    if arity > total {
                        continue;
                    }
                    let a = (pick % total as u64) as usize;
                    let wires = if arity == 1 { vec![a] } else { vec![a, (a + 1) % total] };
                    c.push(g, wires).unwrap();
                }
                prop_assert_eq!(parse_circuit(&write_circuit(&c)).unwrap(), c);
            }
        }
    }
}
