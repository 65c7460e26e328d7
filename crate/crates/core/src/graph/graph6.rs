//! graph6 encoding (McKay), one graph per line.

use super::{Graph, GraphError};

const HEADER: &str = ">>graph6<<";

fn err(line: usize, msg: impl Into<String>) -> GraphError {
    GraphError::Parse { line, msg: msg.into() }
}

pub fn encode(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 is printable ASCII")
}

/// Decodes one graph6 line; `line` is only used in error messages.
pub fn decode_line(text: &str, line: usize) -> Result<Graph, GraphError> {
    let text = text.trim_end_matches(['\n', '\r']);
    let text = text.strip_prefix(HEADER).unwrap_or(text);
    let bytes = text.as_bytes();
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(err(line, format!("invalid graph6 byte 0x{b:02x}")));
    }
    let (n, rest) = match bytes {
        [] => return Err(err(line, "empty graph6 string")),
        [126, 126, tail @ ..] => {
            if tail.len() < 6 {
                return Err(err(line, "truncated vertex count"));
            }
            let n = tail[..6].iter().fold(0usize, |a, &b| (a << 6) | (b - 63) as usize);
            (n, &tail[6..])
        }
        [126, tail @ ..] => {
            if tail.len() < 3 {
                return Err(err(line, "truncated vertex count"));
            }
            let n = tail[..3].iter().fold(0usize, |a, &b| (a << 6) | (b - 63) as usize);
            (n, &tail[3..])
        }
        [b, tail @ ..] => ((b - 63) as usize, tail),
    };
    if n == 0 {
        return Err(err(line, "graph must have at least one vertex"));
    }
    let nbits = n * (n - 1) / 2;
    if rest.len() != nbits.div_ceil(6) {
        return Err(err(line, format!("expected {} adjacency bytes for n={n}, found {}", nbits.div_ceil(6), rest.len())));
    }
    let mut g = Graph::empty(n)?;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = rest[k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                g.add_edge(i, j);
            }
            k += 1;
        }
    }
    Ok(g)
}

/// Parses every non-blank line of `text` as a graph6 string.
pub fn decode_all(text: &str) -> Result<Vec<Graph>, GraphError> {
    let graphs: Vec<Graph> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| decode_line(l.trim(), i + 1))
        .collect::<Result<_, _>>()?;
    if graphs.is_empty() {
        return Err(err(1, "no graphs in input"));
    }
    Ok(graphs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_strings() {
        // Reference encodings from the graph6 format description.
        let c5 = Graph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        assert_eq!(encode(&c5), "Dhc");
        let k4 = Graph::complete(4).unwrap();
        assert_eq!(encode(&k4), "C~");
        assert_eq!(encode(&Graph::empty(1).unwrap()), "@");
        assert_eq!(decode_line("Dhc", 1).unwrap(), c5);
        assert_eq!(decode_line(">>graph6<<C~", 1).unwrap(), k4);
    }

    #[test]
    fn rejects_malformed() {
        assert!(decode_line("?", 1).is_err());
        assert!(decode_line("Dh", 1).is_err());
        assert!(decode_line("Dhcc", 1).is_err());
        assert!(decode_line("D h", 1).is_err());
        assert!(decode_all("\n\n").is_err());
    }

    #[test]
    fn large_vertex_count_header() {
        let mut g = Graph::empty(70).unwrap();
        g.add_edge(3, 69);
        let s = encode(&g);
        assert_eq!(s.as_bytes()[0], 126);
        assert_eq!(decode_line(&s, 1).unwrap(), g);
    }

    proptest! {
        #[test]
        fn round_trip(n in 1usize..20, bits in proptest::collection::vec(any::<bool>(), 190)) {
            let mut g = Graph::empty(n).unwrap();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if bits[k % bits.len()] { g.add_edge(i, j); }
                    k += 1;
                }
            }
            let s = encode(&g);
            prop_assert_eq!(decode_line(&s, 1).unwrap(), g);
        }
    }
}
