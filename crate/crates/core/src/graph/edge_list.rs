//! Plain edge-list format: a header line `n <count>` followed by one
//! `i j` pair per line with 1-based endpoints. Blank lines and `#` comments
//! are ignored; duplicate and reversed edges are tolerated.

use std::fmt::Write;

use super::{Graph, GraphError};

fn err(line: usize, msg: impl Into<String>) -> GraphError {
    GraphError::Parse { line, msg: msg.into() }
}

pub fn parse(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or_else(|| err(1, "missing header line \"n <count>\""))?;
    let mut parts = header.split_whitespace();
    if parts.next() != Some("n") {
        return Err(err(hline, "header must read \"n <count>\""));
    }
    let n: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| err(hline, "invalid vertex count"))?;
    if parts.next().is_some() {
        return Err(err(hline, "trailing tokens after vertex count"));
    }
    if n == 0 {
        return Err(err(hline, "graph must have at least one vertex"));
    }
    let mut g = Graph::empty(n)?;
    for (ln, l) in lines {
        let ends: Vec<&str> = l.split_whitespace().collect();
        if ends.len() != 2 {
            return Err(err(ln, "expected two endpoints"));
        }
        let parse_end = |s: &str| -> Result<usize, GraphError> {
            let v: usize = s.parse().map_err(|_| err(ln, format!("invalid vertex \"{s}\"")))?;
            if v == 0 || v > n {
                return Err(err(ln, format!("vertex {v} out of range 1..{n}")));
            }
            Ok(v - 1)
        };
        let (u, v) = (parse_end(ends[0])?, parse_end(ends[1])?);
        if u == v {
            return Err(err(ln, format!("self-loop at vertex {}", u + 1)));
        }
        g.add_edge(u, v);
    }
    Ok(g)
}

pub fn write(g: &Graph) -> String {
    let mut s = format!("n {}\n", g.n());
    for (u, v) in g.edges() {
        writeln!(s, "{} {}", u + 1, v + 1).unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_duplicates_and_comments() {
        let g = parse("# square\nn 4\n1 2\n2 3\n3 2\n3 4\n\n4 1 # closing\n").unwrap();
        assert_eq!(g.edge_count(), 4);
        assert_eq!(parse(&write(&g)).unwrap(), g);
    }

    #[test]
    fn rejects() {
        assert!(parse("n 3\n1 1\n").is_err());
        assert!(parse("n 0\n").is_err());
        assert!(parse("3\n1 2\n").is_err());
        assert!(parse("n 3\n1 4\n").is_err());
        assert!(parse("n 3\n1 2 3\n").is_err());
        assert!(parse("").is_err());
    }
}
