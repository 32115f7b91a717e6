//! Compact text descriptors for the built-in representations, e.g.
//! `fdpm:r=8,q=2`, `sl:n=5,q=2;functor=ext2`, `suzuki:q=8;scalars`,
//! `ree-stab:q=27`. Parse errors carry the byte offset of the offending
//! token so the CLI can point at it.

use crate::bounds::split_prime_power;
use crate::gf::Field;
use crate::linalg::Functor;
use crate::repfactory::{
    adjoin_scalars, classical_natural, fully_deleted_rep, perm_rep, ree_stabilizer_rep,
    suzuki_rep, ClassicalFamily, GroupRep, RepError,
};

pub const GRAMMAR: &str = "\
descriptor = KIND ':' ARG (',' ARG)* (';' OPT)*
KIND       = fdpm | perm | sl | sp | su | suzuki | ree-stab
ARG        = r=R | n=N | q=Q | alt | sym        (fdpm/perm take r,q and an
             optional alt/sym tag; sl/sp/su take n,q; suzuki/ree-stab take q)
OPT        = functor=ext2|sym2|ext3|adjoint|twisted-k2 | scalars[=ORDER]";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescriptorError {
    pub pos: usize,
    pub msg: String,
}

impl std::fmt::Display for DescriptorError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "at byte {}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for DescriptorError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepKind {
    Fdpm,
    Perm,
    Sl,
    Sp,
    Su,
    Suzuki,
    ReeStab,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Descriptor {
    pub kind: RepKind,
    /// fdpm/perm only: restrict to the alternating group.
    pub alternating: bool,
    pub r: Option<u64>,
    pub n: Option<u64>,
    pub q: Option<u64>,
    pub functor: Option<Functor>,
    /// None: no scalars requested. Some(None): full scalar group.
    /// Some(Some(k)): the order-k subgroup.
    pub scalars: Option<Option<u64>>,
}

fn fail<T>(pos: usize, msg: impl Into<String>) -> Result<T, DescriptorError> {
    Err(DescriptorError { pos, msg: msg.into() })
}

impl Descriptor {
    pub fn parse(s: &str) -> Result<Descriptor, DescriptorError> {
        let colon = match s.find(':') {
            Some(c) => c,
            None => return fail(s.len(), "expected `KIND:...`"),
        };
        let kind = match &s[..colon] {
            "fdpm" => RepKind::Fdpm,
            "perm" => RepKind::Perm,
            "sl" => RepKind::Sl,
            "sp" => RepKind::Sp,
            "su" => RepKind::Su,
            "suzuki" => RepKind::Suzuki,
            "ree-stab" => RepKind::ReeStab,
            other => return fail(0, format!("unknown kind `{other}`")),
        };
        let mut d = Descriptor {
            kind,
            alternating: false,
            r: None,
            n: None,
            q: None,
            functor: None,
            scalars: None,
        };
        let body_start = colon + 1;
        let body = &s[body_start..];
        if body.is_empty() {
            return fail(body_start, "descriptor has no arguments");
        }
        let mut seg_start = body_start;
        for (i, seg) in body.split(';').enumerate() {
            if i == 0 {
                let mut arg_start = seg_start;
                for arg in seg.split(',') {
                    d.parse_arg(arg, arg_start)?;
                    arg_start += arg.len() + 1;
                }
            } else {
                d.parse_opt(seg, seg_start)?;
            }
            seg_start += seg.len() + 1;
        }
        d.check_args(s)?;
        Ok(d)
    }

    fn parse_arg(&mut self, arg: &str, pos: usize) -> Result<(), DescriptorError> {
        let takes_tag = matches!(self.kind, RepKind::Fdpm | RepKind::Perm);
        match arg {
            "alt" | "sym" if takes_tag => {
                self.alternating = arg == "alt";
                return Ok(());
            }
            "alt" | "sym" => return fail(pos, format!("tag `{arg}` only applies to fdpm/perm")),
            _ => {}
        }
        let eq = match arg.find('=') {
            Some(e) => e,
            None => return fail(pos, format!("expected `key=value`, got `{arg}`")),
        };
        let key = &arg[..eq];
        let vpos = pos + eq + 1;
        let value: u64 = match arg[eq + 1..].parse() {
            Ok(v) => v,
            Err(_) => return fail(vpos, format!("`{}` is not a number", &arg[eq + 1..])),
        };
        let slot = match key {
            "r" => &mut self.r,
            "n" => &mut self.n,
            "q" => &mut self.q,
            other => return fail(pos, format!("unknown key `{other}`")),
        };
        if slot.is_some() {
            return fail(pos, format!("duplicate key `{key}`"));
        }
        *slot = Some(value);
        Ok(())
    }

    fn parse_opt(&mut self, opt: &str, pos: usize) -> Result<(), DescriptorError> {
        if opt == "scalars" {
            if self.scalars.is_some() {
                return fail(pos, "duplicate `scalars`");
            }
            self.scalars = Some(None);
            return Ok(());
        }
        if let Some(order) = opt.strip_prefix("scalars=") {
            if self.scalars.is_some() {
                return fail(pos, "duplicate `scalars`");
            }
            let vpos = pos + "scalars=".len();
            match order.parse::<u64>() {
                Ok(k) if k >= 1 => {
                    self.scalars = Some(Some(k));
                    return Ok(());
                }
                _ => return fail(vpos, format!("`{order}` is not a positive order")),
            }
        }
        if let Some(name) = opt.strip_prefix("functor=") {
            if self.functor.is_some() {
                return fail(pos, "duplicate `functor`");
            }
            let vpos = pos + "functor=".len();
            let f = match name {
                "ext2" => Functor::Ext2,
                "sym2" => Functor::Sym2,
                "ext3" => Functor::Ext3,
                "adjoint" => Functor::Adjoint,
                "twisted-k2" => Functor::TwistedTensorK2,
                other => return fail(vpos, format!("unknown functor `{other}`")),
            };
            self.functor = Some(f);
            return Ok(());
        }
        fail(pos, format!("unknown option `{opt}`"))
    }

    fn check_args(&self, s: &str) -> Result<(), DescriptorError> {
        let end = s.len();
        let need = |have: bool, what: &str| {
            if have {
                Ok(())
            } else {
                fail(end, format!("missing required `{what}`"))
            }
        };
        let reject = |gone: bool, what: &str| {
            if gone {
                fail(s.find(what).unwrap_or(end), format!("key `{what}` not accepted here"))
            } else {
                Ok(())
            }
        };
        match self.kind {
            RepKind::Fdpm | RepKind::Perm => {
                need(self.r.is_some(), "r=R")?;
                need(self.q.is_some(), "q=Q")?;
                reject(self.n.is_some(), "n")?;
            }
            RepKind::Sl | RepKind::Sp | RepKind::Su => {
                need(self.n.is_some(), "n=N")?;
                need(self.q.is_some(), "q=Q")?;
                reject(self.r.is_some(), "r")?;
            }
            RepKind::Suzuki | RepKind::ReeStab => {
                need(self.q.is_some(), "q=Q")?;
                reject(self.r.is_some(), "r")?;
                reject(self.n.is_some(), "n")?;
            }
        }
        Ok(())
    }

    pub fn build(&self) -> Result<GroupRep, RepError> {
        let q = self.q.expect("checked at parse time");
        let (p, k) = split_prime_power(q)
            .ok_or_else(|| RepError::BadParams(format!("q = {q} is not a prime power")))?;
        let p: u32 = p
            .try_into()
            .map_err(|_| RepError::BadParams(format!("characteristic {p} is out of range")))?;
        let field = Field::new(p, k)?;
        let mut rep = match self.kind {
            RepKind::Fdpm => {
                fully_deleted_rep(self.r.unwrap() as usize, self.alternating, field)?
            }
            RepKind::Perm => perm_rep(self.r.unwrap() as usize, self.alternating, field)?,
            RepKind::Sl => classical_natural(ClassicalFamily::SL, self.n.unwrap() as usize, field)?,
            RepKind::Sp => classical_natural(ClassicalFamily::Sp, self.n.unwrap() as usize, field)?,
            RepKind::Su => classical_natural(ClassicalFamily::SU, self.n.unwrap() as usize, field)?,
            RepKind::Suzuki => suzuki_rep(field)?,
            RepKind::ReeStab => ree_stabilizer_rep(field)?.rep,
        };
        if let Some(f) = self.functor {
            rep = rep.apply_functor(f)?;
        }
        if let Some(order) = self.scalars {
            rep = adjoin_scalars(&rep, order)?;
        }
        Ok(rep)
    }
}

/// Space sizes on the command line: plain integers or `B^E`.
pub fn parse_space(s: &str) -> Result<u64, String> {
    if let Some((b, e)) = s.split_once('^') {
        let b: u64 = b.trim().parse().map_err(|_| format!("bad base in `{s}`"))?;
        let e: u32 = e.trim().parse().map_err(|_| format!("bad exponent in `{s}`"))?;
        return b
            .checked_pow(e)
            .ok_or_else(|| format!("`{s}` overflows a 64-bit space size"));
    }
    s.parse().map_err(|_| format!("`{s}` is not a space size"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_builtin_forms() {
        let d = Descriptor::parse("fdpm:r=8,q=2").unwrap();
        assert_eq!(d.kind, RepKind::Fdpm);
        assert_eq!((d.r, d.q, d.alternating), (Some(8), Some(2), false));

        let d = Descriptor::parse("fdpm:alt,r=5,q=3").unwrap();
        assert!(d.alternating);

        let d = Descriptor::parse("sl:n=5,q=2;functor=ext2").unwrap();
        assert_eq!(d.kind, RepKind::Sl);
        assert_eq!(d.functor, Some(Functor::Ext2));

        let d = Descriptor::parse("suzuki:q=8;scalars").unwrap();
        assert_eq!(d.scalars, Some(None));

        let d = Descriptor::parse("fdpm:r=5,q=5;scalars=4").unwrap();
        assert_eq!(d.scalars, Some(Some(4)));

        let d = Descriptor::parse("ree-stab:q=27").unwrap();
        assert_eq!(d.kind, RepKind::ReeStab);
    }

    #[test]
    fn errors_carry_positions() {
        let e = Descriptor::parse("nope:q=2").unwrap_err();
        assert_eq!(e.pos, 0);

        // the bad value starts after "fdpm:r="
        let e = Descriptor::parse("fdpm:r=x,q=2").unwrap_err();
        assert_eq!(e.pos, 7);

        let e = Descriptor::parse("fdpm:r=8").unwrap_err();
        assert!(e.msg.contains("q=Q"), "{e}");

        let e = Descriptor::parse("sl:n=4,q=2;functor=bogus").unwrap_err();
        assert_eq!(e.pos, 19);

        let e = Descriptor::parse("sl:n=4,q=2,r=3").unwrap_err();
        assert!(e.msg.contains("`r`"), "{e}");

        let e = Descriptor::parse("sl:alt,n=4,q=2").unwrap_err();
        assert_eq!(e.pos, 3);
    }

    #[test]
    fn builds_reps_with_expected_dims() {
        let rep = Descriptor::parse("fdpm:r=8,q=2").unwrap().build().unwrap();
        assert_eq!(rep.n, 6);
        assert_eq!(rep.field.q(), 2);

        let rep = Descriptor::parse("sl:n=5,q=2;functor=ext2").unwrap().build().unwrap();
        assert_eq!(rep.n, 10);

        let rep = Descriptor::parse("sl:n=2,q=5;functor=sym2;scalars").unwrap().build().unwrap();
        assert_eq!(rep.n, 3);
        assert!(rep.contains_scalars);

        assert!(Descriptor::parse("fdpm:r=8,q=6").unwrap().build().is_err());
    }

    #[test]
    fn space_sizes() {
        assert_eq!(parse_space("1024").unwrap(), 1024);
        assert_eq!(parse_space("2^10").unwrap(), 1024);
        assert!(parse_space("2^99").is_err());
        assert!(parse_space("x").is_err());
    }
}
