//! graph6 encoding: an order prefix followed by the upper triangle of the
//! adjacency matrix in column-major order, six bits per byte offset by 63.

use thiserror::Error;

use super::{Graph, MAX_ORDER};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("empty graph6 string")]
    Empty,
    #[error("byte {offset}: value {byte:#04x} outside the graph6 range 63..=126")]
    BadByte { offset: usize, byte: u8 },
    #[error("byte {offset}: order {order} exceeds the {MAX_ORDER}-vertex limit")]
    OrderTooLarge { offset: usize, order: usize },
    #[error("byte {offset}: expected {expected} bytes in total, found {found}")]
    Length {
        offset: usize,
        expected: usize,
        found: usize,
    },
    #[error("byte {offset}: padding bits are not zero")]
    Padding { offset: usize },
}

fn check(offset: usize, byte: u8) -> Result<u8, Graph6Error> {
    if (63..=126).contains(&byte) {
        Ok(byte - 63)
    } else {
        Err(Graph6Error::BadByte { offset, byte })
    }
}

/// Parses one graph6 line (surrounding whitespace ignored, no `>>graph6<<`
/// header).
pub fn from_graph6(text: &str) -> Result<Graph, Graph6Error> {
    let bytes = text.trim().as_bytes();
    let first = *bytes.first().ok_or(Graph6Error::Empty)?;
    let (order, body_start) = if first == 126 {
        if bytes.get(1) == Some(&126) {
            // 8-byte form; only reachable for orders far beyond the limit.
            let mut n = 0usize;
            for i in 2..8 {
                let b = *bytes.get(i).ok_or(Graph6Error::Length {
                    offset: bytes.len(),
                    expected: 8,
                    found: bytes.len(),
                })?;
                n = n << 6 | check(i, b)? as usize;
            }
            (n, 8)
        } else {
            let mut n = 0usize;
            for i in 1..4 {
                let b = *bytes.get(i).ok_or(Graph6Error::Length {
                    offset: bytes.len(),
                    expected: 4,
                    found: bytes.len(),
                })?;
                n = n << 6 | check(i, b)? as usize;
            }
            (n, 4)
        }
    } else {
        (check(0, first)? as usize, 1)
    };
    if order > MAX_ORDER {
        return Err(Graph6Error::OrderTooLarge { offset: 0, order });
    }

    let nbits = order * order.saturating_sub(1) / 2;
    let nbytes = nbits.div_ceil(6);
    let body = &bytes[body_start..];
    if body.len() != nbytes {
        return Err(Graph6Error::Length {
            offset: body_start + body.len().min(nbytes),
            expected: body_start + nbytes,
            found: bytes.len(),
        });
    }

    let mut g = Graph::empty(order).expect("order checked");
    let mut k = 0usize;
    for j in 1..order {
        for i in 0..j {
            let offset = body_start + k / 6;
            let chunk = check(offset, body[k / 6])?;
            if chunk >> (5 - k % 6) & 1 == 1 {
                g.set_edge(i, j);
            }
            k += 1;
        }
    }
    if nbits % 6 != 0 {
        let offset = body_start + nbytes - 1;
        let last = check(offset, body[nbytes - 1])?;
        if last & ((1u8 << (6 - nbits % 6)) - 1) != 0 {
            return Err(Graph6Error::Padding { offset });
        }
    }
    Ok(g)
}

/// Encodes `g` in graph6. Orders up to 62 use the one-byte prefix, 63 and 64
/// the four-byte `~` form.
pub fn to_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::with_capacity(4 + (n * n / 12) + 1);
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        out.extend([(n >> 12) & 63, (n >> 6) & 63, n & 63].map(|x| x as u8 + 63));
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
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
    String::from_utf8(out).expect("graph6 is ASCII")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Reference encoder written straight from the format definition: list
    /// the column-major upper-triangle bits, pad, chunk into sixes.
    fn reference_encode(n: usize, edges: &[(usize, usize)]) -> String {
        let mut bits = Vec::new();
        for j in 1..n {
            for i in 0..j {
                bits.push(edges.contains(&(i, j)) || edges.contains(&(j, i)));
            }
        }
        while bits.len() % 6 != 0 {
            bits.push(false);
        }
        let mut s = String::new();
        s.push((n as u8 + 63) as char);
        for chunk in bits.chunks(6) {
            let v = chunk.iter().fold(0u8, |a, &b| a << 1 | b as u8);
            s.push((v + 63) as char);
        }
        s
    }

    #[test]
    fn complete_five() {
        let k5: Vec<_> = (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j))).collect();
        assert_eq!(reference_encode(5, &k5), "D~{");
        let g = from_graph6("D~{").unwrap();
        assert_eq!(g, Graph::from_edges(5, &k5).unwrap());
        assert_eq!(to_graph6(&g), "D~{");
    }

    #[test]
    fn cycle_five() {
        let c5 = [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)];
        let text = reference_encode(5, &c5);
        assert_eq!(text, "Dhc");
        assert_eq!(from_graph6(&text).unwrap(), Graph::from_edges(5, &c5).unwrap());
    }

    #[test]
    fn tiny_orders() {
        assert_eq!(to_graph6(&Graph::empty(0).unwrap()), "?");
        assert_eq!(from_graph6("?").unwrap().order(), 0);
        let one = from_graph6("@").unwrap();
        assert_eq!((one.order(), one.edge_count()), (1, 0));
        assert_eq!(from_graph6("A_\n").unwrap().edge_count(), 1);
    }

    #[test]
    fn long_prefix_orders() {
        let mut g = Graph::empty(64).unwrap();
        g.set_edge(0, 63);
        g.set_edge(31, 62);
        let text = to_graph6(&g);
        assert!(text.starts_with("~?@?"));
        assert_eq!(from_graph6(&text).unwrap(), g);
    }

    #[test]
    fn errors_report_offsets() {
        assert_eq!(from_graph6(""), Err(Graph6Error::Empty));
        assert_eq!(
            from_graph6("D~\x7f"),
            Err(Graph6Error::BadByte { offset: 2, byte: 0x7f })
        );
        assert!(matches!(from_graph6("D~"), Err(Graph6Error::Length { .. })));
        assert!(matches!(from_graph6("D~{?"), Err(Graph6Error::Length { .. })));
        assert_eq!(from_graph6("D~~"), Err(Graph6Error::Padding { offset: 2 }));
        assert!(matches!(
            from_graph6("~?A?"),
            Err(Graph6Error::OrderTooLarge { order: 128, .. })
        ));
    }

    proptest! {
        #[test]
        fn round_trip(n in 0usize..=64, seed in any::<u64>()) {
            let mut g = Graph::empty(n).unwrap();
            let mut x = seed | 1;
            for j in 1..n {
                for i in 0..j {
                    x ^= x << 13; x ^= x >> 7; x ^= x << 17;
                    if x & 1 == 1 { g.set_edge(i, j); }
                }
            }
            prop_assert_eq!(from_graph6(&to_graph6(&g)).unwrap(), g);
        }
    }
}
