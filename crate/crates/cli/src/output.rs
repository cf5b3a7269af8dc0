//! Serialization helpers shared by the subcommands.

use anyhow::Result;
use cuspavg_core::SumSeries;
use serde::Serialize;

pub fn json_bytes<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>> {
    let mut v = serde_json::to_vec_pretty(value)?;
    v.push(b'\n');
    Ok(v)
}

pub fn series_bytes(series: &SumSeries) -> Result<Vec<u8>> {
    let mut v = Vec::new();
    series.write_csv(&mut v)?;
    Ok(v)
}

/// Parses `a,b,c` into a list.
pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(|x| x.trim().parse::<T>().map_err(|e| anyhow::anyhow!("bad list entry `{}`: {e}", x.trim())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_parse() {
        assert_eq!(parse_list::<u64>("1000, 10000").unwrap(), vec![1000, 10000]);
        assert!(parse_list::<f64>("1,x").is_err());
    }
}
