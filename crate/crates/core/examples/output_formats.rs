//! Self-describing CSV and JSON output and re-parsing of a CSV file.

use cherednik::output::{parse_csv, Format, Header, Table};
use cherednik::specfun::opdam_g;
use cherednik::{Complex64, JCParams};

fn main() -> cherednik::Result<()> {
    let p = JCParams::new(1.0, 0.5)?;
    let header = Header::new().with("params", p).with("lambda", 1.5);
    let rows = [-1.0, 0.0, 1.0]
        .iter()
        .map(|&x| {
            let g = opdam_g(&p, Complex64::new(1.5, 0.0), x)?;
            Ok(vec![x, g.re, g.im])
        })
        .collect::<cherednik::Result<_>>()?;
    let table = Table::new(&["x", "re", "im"], rows);
    let csv = table.render(&header, Format::Csv)?;
    print!("{csv}");
    print!("{}", table.render(&header, Format::Json)?);
    let (h, t) = parse_csv(&csv)?;
    assert_eq!(t, table);
    println!("re-parsed {} rows, params = {}", t.rows.len(), h.get("params").unwrap_or("?"));
    Ok(())
}
