//! Text input and output: gzip detection, comment-aware line reading, similarity tables.

use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use flate2::read::MultiGzDecoder;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::solver::SimilarityTable;

const GZIP_MAGIC: [u8; 2] = [0x1f, 0x8b];

/// Wraps `reader` in a gzip decoder when the stream starts with the gzip magic bytes.
pub fn maybe_gzip<'a, R: Read + 'a>(reader: R) -> Result<Box<dyn BufRead + 'a>> {
    let mut buffered = BufReader::new(reader);
    let head = buffered.fill_buf()?;
    if head.len() >= 2 && head[..2] == GZIP_MAGIC {
        Ok(Box::new(BufReader::new(MultiGzDecoder::new(buffered))))
    } else {
        Ok(Box::new(buffered))
    }
}

pub fn open_text(path: &Path) -> Result<Box<dyn BufRead>> {
    maybe_gzip(File::open(path)?)
}

/// Yields `(1-based line number, trimmed line)` for every non-blank, non-comment line.
pub(crate) fn content_lines<R: BufRead>(
    reader: R,
) -> impl Iterator<Item = (usize, std::io::Result<String>)> {
    reader
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.map(|l| l.trim().to_string())))
        .filter(|(_, line)| match line {
            Ok(l) => !l.is_empty() && !l.starts_with('#'),
            Err(_) => true,
        })
}

/// Formats a score with 6 decimals, or the shortest exact representation.
pub fn format_score(x: f64, full_precision: bool) -> String {
    if full_precision {
        format!("{x}")
    } else {
        format!("{x:.6}")
    }
}

/// Writes `a<TAB>b<TAB>value` for every off-diagonal entry above `threshold`.
pub fn write_table<W: Write>(
    graph: &Graph,
    table: &SimilarityTable,
    threshold: f64,
    full_precision: bool,
    mut out: W,
) -> Result<()> {
    for (a, b, v) in table.entries_above(threshold) {
        writeln!(
            out,
            "{}\t{}\t{}",
            graph.display_name(a),
            graph.display_name(b),
            format_score(v, full_precision)
        )?;
    }
    Ok(())
}

/// Reads a table written by [`write_table`]; absent off-diagonal entries are 0.
pub fn read_table<R: Read>(source: R, graph: &Graph) -> Result<SimilarityTable> {
    let n = graph.node_count();
    let mut values = vec![0.0; n * n];
    for (line_no, line) in content_lines(maybe_gzip(source)?) {
        let line = line?;
        let fields: Vec<&str> = line.split('\t').collect();
        let parse_err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        if fields.len() != 3 {
            return Err(parse_err(format!(
                "expected 3 tab-separated fields, found {}",
                fields.len()
            )));
        }
        let a = graph
            .resolve(fields[0])
            .map_err(|e| parse_err(e.to_string()))?;
        let b = graph
            .resolve(fields[1])
            .map_err(|e| parse_err(e.to_string()))?;
        let v: f64 = fields[2]
            .parse()
            .map_err(|_| parse_err(format!("bad value '{}'", fields[2])))?;
        values[a * n + b] = v;
    }
    SimilarityTable::from_values(n, values)
}
