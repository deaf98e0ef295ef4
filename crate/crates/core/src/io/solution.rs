//! Plain-text solution files.
//!
//! ```text
//! <total cost>
//! <depot> <arrive depot> <cost> <load>: c1 c2 ...
//! ```
//! Open-route instances drop the arrive depot. Node ids are the external
//! labels of the instance file.

use std::fmt::Write as _;
use std::path::Path;

use super::IoError;
use crate::model::{objective, route_distance, Instance, Route, Solution};

pub fn format_solution(sol: &Solution, inst: &Instance) -> String {
    let label = |i: usize| inst.node(i).label;
    let mut s = format!("{:.2}\n", objective(sol, inst));
    for r in &sol.routes {
        let _ = write!(s, "{}", label(r.depart()));
        if !inst.open_routes() {
            let _ = write!(s, " {}", label(r.arrive()));
        }
        let _ = write!(s, " {:.2} {}:", route_distance(r, inst), r.load());
        for &c in r.customers() {
            let _ = write!(s, " {}", label(c));
        }
        s.push('\n');
    }
    s
}

pub fn write_solution(sol: &Solution, inst: &Instance, path: &Path) -> Result<(), IoError> {
    std::fs::write(path, format_solution(sol, inst)).map_err(|e| IoError::file(path, e))
}

pub fn read_solution(path: &Path, inst: &Instance) -> Result<Solution, IoError> {
    let text = std::fs::read_to_string(path).map_err(|e| IoError::file(path, e))?;
    parse_solution(&text, inst)
}

fn err(line: usize, msg: impl Into<String>) -> IoError {
    IoError::Parse { line, msg: msg.into() }
}

pub fn parse_solution(text: &str, inst: &Instance) -> Result<Solution, IoError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, head) = lines.next().ok_or_else(|| err(1, "empty solution file"))?;
    head.trim()
        .parse::<f64>()
        .map_err(|_| err(1, format!("invalid total cost `{}`", head.trim())))?;

    let node = |line: usize, tok: &str, depot: bool| -> Result<usize, IoError> {
        let label: usize = tok.parse().map_err(|_| err(line, format!("invalid node id `{tok}`")))?;
        let i = inst
            .index_of_label(label)
            .ok_or_else(|| err(line, format!("unknown node id {label}")))?;
        if inst.is_depot(i) != depot {
            let want = if depot { "depot" } else { "customer" };
            return Err(err(line, format!("node {label} is not a {want}")));
        }
        Ok(i)
    };

    let mut routes = Vec::new();
    for (i, l) in lines {
        let line = i + 1;
        let (head, tail) = l
            .split_once(':')
            .ok_or_else(|| err(line, "missing `:` after route header"))?;
        let h: Vec<&str> = head.split_whitespace().collect();
        let want = if inst.open_routes() { 3 } else { 4 };
        if h.len() != want {
            return Err(err(
                line,
                format!("route header needs {want} fields, found {}", h.len()),
            ));
        }
        let depart = node(line, h[0], true)?;
        let arrive = if inst.open_routes() {
            depart
        } else {
            node(line, h[1], true)?
        };
        for (k, what) in [(want - 2, "route cost"), (want - 1, "load")] {
            h[k].parse::<f64>()
                .map_err(|_| err(line, format!("invalid {what} `{}`", h[k])))?;
        }
        let customers = tail
            .split_whitespace()
            .map(|t| node(line, t, false))
            .collect::<Result<Vec<_>, _>>()?;
        routes.push(Route::new(depart, arrive, customers, inst));
    }
    Ok(Solution::new(routes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Variant;
    use crate::synth::{random_instance, random_solution};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn empty_solution_is_a_single_line() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let inst = random_instance(Variant::Mdvrp, 2, 5, &mut rng);
        let text = format_solution(&Solution::new(Vec::new()), &inst);
        assert_eq!(text, "0.00\n");
        assert!(parse_solution(&text, &inst).unwrap().routes.is_empty());
    }

    #[test]
    fn two_routes_give_three_lines() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let inst = random_instance(Variant::Mdvrp, 2, 4, &mut rng);
        let sol = Solution::new(vec![
            Route::new(0, 0, vec![2, 3], &inst),
            Route::new(1, 1, vec![4, 5], &inst),
        ]);
        assert_eq!(format_solution(&sol, &inst).lines().count(), 3);
    }

    #[test]
    fn round_trip() {
        for (k, variant) in [Variant::Mdvrp, Variant::Mdvrptw, Variant::Mdovrp]
            .into_iter()
            .enumerate()
        {
            for seed in 0..5 {
                let mut rng = ChaCha8Rng::seed_from_u64(seed * 7 + k as u64);
                let inst = random_instance(variant, 3, 15, &mut rng);
                let sol = random_solution(&inst, &mut rng);
                let text = format_solution(&sol, &inst);
                let back = parse_solution(&text, &inst).unwrap();
                assert_eq!(back.canonical_routes(), sol.canonical_routes());
                let printed: f64 = text.lines().next().unwrap().parse().unwrap();
                assert!((objective(&back, &inst) - printed).abs() <= 1e-2);
            }
        }
    }

    #[test]
    fn rejects_customer_as_depot() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let inst = random_instance(Variant::Mdvrp, 2, 4, &mut rng);
        let c = inst.node(2).label;
        let text = format!("1.00\n{c} {c} 1.00 1: \n");
        let e = parse_solution(&text, &inst).unwrap_err();
        assert!(matches!(e, IoError::Parse { line: 2, .. }), "{e}");
    }
}
