//! Domain strings and numbers-with-pi for the command line.

use eigenlab::geometry::{l_shape, DomainSpec};
use eigenlab::{Error, Result};

/// Parse "1.5", "2pi", "pi".
pub fn parse_number(s: &str) -> Result<f64> {
    let t = s.trim();
    let bad = || Error::Config(format!("bad number `{s}`"));
    if let Some(prefix) = t.strip_suffix("pi") {
        let mult = if prefix.is_empty() {
            1.0
        } else {
            prefix.parse::<f64>().map_err(|_| bad())?
        };
        return Ok(mult * std::f64::consts::PI);
    }
    t.parse::<f64>().map_err(|_| bad())
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(parse_number).collect()
}

/// Domain DSL:
///   disk:r | ellipse:a,b | rectangle:a,b | square:side | ball3:r |
///   box3:a,b,c | dumbbell:r,eps,ell | lshape:side |
///   polygon:x1,y1;x2,y2;... | two_disks:r[,gap] | two_balls3:r1[,r2[,gap]]
pub fn parse_domain(s: &str) -> Result<DomainSpec> {
    let (family, args) = match s.split_once(':') {
        Some((f, a)) => (f.trim(), a.trim()),
        None => (s.trim(), ""),
    };
    let nums = |expect: std::ops::RangeInclusive<usize>| -> Result<Vec<f64>> {
        let v = parse_list(args)?;
        if !expect.contains(&v.len()) {
            return Err(Error::Config(format!(
                "family `{family}` takes {expect:?} parameters, got {}",
                v.len()
            )));
        }
        Ok(v)
    };
    let spec = match family {
        "disk" => {
            let v = nums(1..=1)?;
            DomainSpec::Disk { r: v[0] }
        }
        "ellipse" => {
            let v = nums(2..=2)?;
            DomainSpec::Ellipse { a: v[0], b: v[1] }
        }
        "rectangle" => {
            let v = nums(2..=2)?;
            DomainSpec::Rectangle { a: v[0], b: v[1] }
        }
        "square" => {
            let v = nums(1..=1)?;
            DomainSpec::Rectangle { a: v[0], b: v[0] }
        }
        "ball3" => {
            let v = nums(1..=1)?;
            DomainSpec::Ball3 { r: v[0] }
        }
        "box3" => {
            let v = nums(3..=3)?;
            DomainSpec::Box3 { a: v[0], b: v[1], c: v[2] }
        }
        "dumbbell" => {
            let v = nums(3..=3)?;
            DomainSpec::Dumbbell {
                lobe_radius: v[0],
                neck_half_width: v[1],
                neck_length: v[2],
            }
        }
        "lshape" => {
            let v = nums(1..=1)?;
            l_shape(v[0])
        }
        "polygon" => {
            let mut vertices = Vec::new();
            for pair in args.split(';') {
                let xy = parse_list(pair)?;
                if xy.len() != 2 {
                    return Err(Error::Config(format!("polygon vertex `{pair}` is not x,y")));
                }
                vertices.push([xy[0], xy[1]]);
            }
            DomainSpec::Polygon { vertices }
        }
        "two_disks" => {
            let v = nums(1..=2)?;
            DomainSpec::two_disks(v[0], v.get(1).copied().unwrap_or(0.5 * v[0]))
        }
        "two_balls3" => {
            let v = nums(1..=3)?;
            let r1 = v[0];
            let r2 = v.get(1).copied().unwrap_or(r1);
            let gap = v.get(2).copied().unwrap_or(0.5 * r1);
            DomainSpec::two_balls3(r1, r2, gap)
        }
        other => {
            return Err(Error::Config(format!("unknown domain family `{other}`")));
        }
    };
    spec.validate()
        .map_err(|e| Error::Config(format!("invalid domain `{s}`: {e}")))?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_with_pi() {
        assert_eq!(parse_number("2pi").unwrap(), 2.0 * std::f64::consts::PI);
        assert_eq!(parse_number("pi").unwrap(), std::f64::consts::PI);
        assert_eq!(parse_number("1.5").unwrap(), 1.5);
        assert!(parse_number("two").is_err());
    }

    #[test]
    fn domains_parse() {
        assert!(matches!(parse_domain("disk:1").unwrap(), DomainSpec::Disk { .. }));
        assert!(matches!(
            parse_domain("rectangle:3.14159,1.570796").unwrap(),
            DomainSpec::Rectangle { .. }
        ));
        assert!(matches!(parse_domain("square:2pi").unwrap(), DomainSpec::Rectangle { .. }));
        assert!(parse_domain("disk:-1").is_err());
        assert!(parse_domain("mystery:1").is_err());
        assert!(parse_domain("polygon:0,0;1,0;1,1;0,1").is_ok());
    }
}
