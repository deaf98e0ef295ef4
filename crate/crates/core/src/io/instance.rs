//! Cordeau-style instance files.
//!
//! ```text
//! type m n t
//! D Q                      (t lines, 0 = unlimited)
//! id x y d q f a combos.. [e l]   (n customers, then t depots)
//! ```

use std::path::Path;

use super::IoError;
use crate::model::{FleetLimits, Instance, Node, Variant};

/// Header type code used by the benchmark distribution of each variant.
pub fn expected_type_code(variant: Variant) -> i64 {
    match variant {
        Variant::Mdvrp | Variant::Mdovrp => 2,
        Variant::Mdvrptw => 6,
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Ignore the vehicle count of the header.
    pub relax_fleet: bool,
}

pub fn parse_instance(path: &Path, variant: Variant, opts: ParseOptions) -> Result<Instance, IoError> {
    let text = std::fs::read_to_string(path).map_err(|e| IoError::file(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_instance_str(&name, &text, variant, opts)
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    /// Next non-blank line as `(line number, tokens)`.
    fn next(&mut self, what: &str) -> Result<(usize, Vec<&'a str>), IoError> {
        for (i, l) in self.inner.by_ref() {
            self.last = i + 1;
            let toks: Vec<&str> = l.split_whitespace().collect();
            if !toks.is_empty() {
                return Ok((i + 1, toks));
            }
        }
        Err(IoError::Parse {
            line: self.last + 1,
            msg: format!("unexpected end of file, expected {what}"),
        })
    }
}

fn num<T: std::str::FromStr>(line: usize, toks: &[&str], k: usize, field: &str) -> Result<T, IoError> {
    let tok = toks.get(k).ok_or_else(|| IoError::Parse {
        line,
        msg: format!("missing field `{field}` (column {})", k + 1),
    })?;
    tok.parse().map_err(|_| IoError::Parse {
        line,
        msg: format!("invalid `{field}` value `{tok}`"),
    })
}

/// Node line `id x y d q f a <a combos> [e l]`. Depot lines may stop after
/// the coordinates.
fn node_line(line: usize, toks: &[&str], depot: bool, tw: bool) -> Result<Node, IoError> {
    let label: usize = num(line, toks, 0, "id")?;
    let x: f64 = num(line, toks, 1, "x")?;
    let y: f64 = num(line, toks, 2, "y")?;
    let short = depot && toks.len() < 7;
    let (service, demand, a) = if short {
        (0.0, 0.0, 0usize)
    } else {
        (
            num::<f64>(line, toks, 3, "d")?,
            num::<f64>(line, toks, 4, "q")?,
            num::<usize>(line, toks, 6, "a")?,
        )
    };
    let combos_end = if short { 3 } else { 7 + a };
    if !short {
        for k in 7..combos_end {
            num::<i64>(line, toks, k, "visit combination")?;
        }
    }
    let mut node = if depot {
        Node::depot(label, x, y)
    } else {
        Node::customer(label, x, y, demand, service)
    };
    if tw {
        // The window closes the line, after any combination fields.
        if toks.len() < combos_end + 2 {
            return Err(IoError::Parse {
                line,
                msg: "missing time window fields `e l`".into(),
            });
        }
        let k = toks.len() - 2;
        let e: f64 = num(line, toks, k, "e")?;
        let l: f64 = num(line, toks, k + 1, "l")?;
        if e > l {
            return Err(IoError::Parse {
                line,
                msg: format!("empty time window [{e}, {l}]"),
            });
        }
        node = node.with_window(e, l);
    }
    Ok(node)
}

pub fn parse_instance_str(name: &str, text: &str, variant: Variant, opts: ParseOptions) -> Result<Instance, IoError> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        last: 0,
    };
    let (hl, header) = lines.next("header `type m n t`")?;
    if header.len() != 4 {
        return Err(IoError::Parse {
            line: hl,
            msg: format!("header needs 4 fields `type m n t`, found {}", header.len()),
        });
    }
    let code: i64 = num(hl, &header, 0, "type")?;
    let expected = expected_type_code(variant);
    if code != expected {
        return Err(IoError::TypeCode {
            found: code,
            variant,
            expected,
        });
    }
    let m: usize = num(hl, &header, 1, "m")?;
    let n: usize = num(hl, &header, 2, "n")?;
    let t: usize = num(hl, &header, 3, "t")?;
    if n == 0 || t == 0 {
        return Err(IoError::Parse {
            line: hl,
            msg: "need at least one customer and one depot".into(),
        });
    }

    let mut limits: Option<(f64, f64)> = None;
    for _ in 0..t {
        let (l, toks) = lines.next("depot limits `D Q`")?;
        if toks.len() != 2 {
            return Err(IoError::Parse {
                line: l,
                msg: format!("expected `D Q`, found {} fields", toks.len()),
            });
        }
        let dq: (f64, f64) = (num(l, &toks, 0, "D")?, num(l, &toks, 1, "Q")?);
        if dq.0 < 0.0 || dq.1 < 0.0 {
            return Err(IoError::Parse {
                line: l,
                msg: "negative duration or capacity".into(),
            });
        }
        match limits {
            None => limits = Some(dq),
            Some(first) if first != dq => {
                return Err(IoError::Parse {
                    line: l,
                    msg: format!(
                        "per-depot limits differ ({} {} vs {} {}); only shared limits are supported",
                        dq.0, dq.1, first.0, first.1
                    ),
                })
            }
            _ => {}
        }
    }
    let (dmax, cap) = limits.expect("t >= 1");

    let tw = variant.has_time_windows();
    let mut customers = Vec::with_capacity(n);
    for _ in 0..n {
        let (l, toks) = lines.next("customer line")?;
        customers.push(node_line(l, &toks, false, tw)?);
    }
    let mut depots = Vec::with_capacity(t);
    for _ in 0..t {
        let (l, toks) = lines.next("depot line")?;
        depots.push(node_line(l, &toks, true, tw)?);
    }
    if let Ok((l, _)) = lines.next("") {
        return Err(IoError::Parse {
            line: l,
            msg: format!("trailing content after {n} customers and {t} depots"),
        });
    }
    let mut seen = std::collections::HashSet::new();
    for node in depots.iter().chain(&customers) {
        if !seen.insert(node.label) {
            return Err(IoError::Parse {
                line: hl,
                msg: format!("duplicate node id {}", node.label),
            });
        }
    }

    let fleet = FleetLimits {
        vehicles_per_depot: if opts.relax_fleet || m == 0 { None } else { Some(m) },
        capacity: if cap == 0.0 { f64::INFINITY } else { cap },
        max_duration: if dmax == 0.0 { None } else { Some(dmax) },
    };
    Ok(Instance::euclidean(name, variant, depots, customers, fleet)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOY: &str = "2 3 4 2
0 80
0 80
1 10 0 0 12 1 4 1 2 4 8
2 0 10 0 20 1 4 1 2 4 8
3 -5 -5 0 7 1 4 1 2 4 8
4 5 5 0 30 1 4 1 2 4 8
5 0 0 0 0 0 0
6 10 10 0 0 0 0
";

    const TOY_TW: &str = "6 2 2 1
450 200

1 -30 10 2 9 1 1 1 0 300
2 20 40 4 5 1 1 1 50 400
3 0 0 0 0 0 0 0 600
";

    #[test]
    fn parses_layout() {
        let inst = parse_instance_str("toy", TOY, Variant::Mdvrp, ParseOptions::default()).unwrap();
        assert_eq!(inst.num_customers(), 4);
        assert_eq!(inst.num_depots(), 2);
        assert_eq!(inst.fleet_per_depot(), Some(3));
        assert_eq!(inst.max_duration(), None);
        assert_eq!(inst.capacity(), 80.0);
        assert_eq!(inst.node(0).label, 5);
        assert_eq!(inst.node(2).label, 1);
        assert_eq!(inst.node(3).demand, 20.0);
        assert!((inst.dist(0, 2) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn time_windows_come_last() {
        let inst = parse_instance_str("tw", TOY_TW, Variant::Mdvrptw, ParseOptions::default()).unwrap();
        assert_eq!(inst.max_duration(), Some(450.0));
        let c = inst.node(2);
        assert_eq!((c.service, c.demand, c.earliest, c.latest), (4.0, 5.0, 50.0, 400.0));
        assert_eq!((inst.node(0).earliest, inst.node(0).latest), (0.0, 600.0));
    }

    #[test]
    fn relaxations() {
        let r = parse_instance_str("r", TOY, Variant::Mdvrp, ParseOptions { relax_fleet: true }).unwrap();
        assert_eq!(r.fleet_per_depot(), None);
        let o = parse_instance_str("o", TOY, Variant::Mdovrp, ParseOptions::default()).unwrap();
        assert!(o.open_routes());
        assert_eq!(o.fleet_per_depot(), None);
    }

    #[test]
    fn errors_name_the_line() {
        let bad = TOY.replace("2 0 10 0 20", "2 0 x 0 20");
        let e = parse_instance_str("b", &bad, Variant::Mdvrp, ParseOptions::default()).unwrap_err();
        assert!(matches!(e, IoError::Parse { line: 5, .. }), "{e}");

        let short: String = TOY.lines().take(6).collect::<Vec<_>>().join("\n");
        let e = parse_instance_str("s", &short, Variant::Mdvrp, ParseOptions::default()).unwrap_err();
        assert!(matches!(e, IoError::Parse { line: 7, .. }), "{e}");

        let extra = format!("{TOY}7 1 1 0 0 0 0\n");
        let e = parse_instance_str("x", &extra, Variant::Mdvrp, ParseOptions::default()).unwrap_err();
        assert!(matches!(e, IoError::Parse { line: 10, .. }), "{e}");
    }

    #[test]
    fn wrong_type_code_lists_expected() {
        let e = parse_instance_str("t", TOY, Variant::Mdvrptw, ParseOptions::default()).unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("expected 6"), "{msg}");
    }
}
