use crate::semantics::FrameClass;
use crate::syntax::Formula;

/// Depth that must remain below a state for the truth of `f` there to be
/// settled by a depth-truncated standard model. `None` means no finite depth
/// suffices.
///
/// `ucl_depth` bounds how far a refuting chain for a ⊎ member may reach.
pub fn horizon(f: &Formula, frame: FrameClass, ucl_depth: usize) -> Option<usize> {
    let sees_descendants = matches!(frame, FrameClass::S4 | FrameClass::S5);
    match f {
        Formula::Prop(_) => Some(0),
        Formula::Neg(a) => horizon(a, frame, ucl_depth),
        Formula::Impl(a, b) => {
            Some(horizon(a, frame, ucl_depth)?.max(horizon(b, frame, ucl_depth)?))
        }
        Formula::Box(_, a) | Formula::Cap(_, a) => {
            let h = horizon(a, frame, ucl_depth)?;
            if !sees_descendants {
                Some(h + 1)
            } else if h == 0 {
                Some(1)
            } else {
                None
            }
        }
        Formula::Ucl(_, a) => match horizon(a, frame, ucl_depth)? {
            0 => Some(ucl_depth),
            _ => None,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn h(s: &str, frame: FrameClass, w: usize) -> Option<usize> {
        horizon(&parse(s).unwrap(), frame, w)
    }

    #[test]
    fn examples() {
        assert_eq!(h("p -> q", FrameClass::K, 0), Some(0));
        assert_eq!(h("[1][&1 2]p", FrameClass::K, 0), Some(2));
        assert_eq!(h("[1]~[2]p -> q", FrameClass::B, 0), Some(2));
        assert_eq!(h("[1]p", FrameClass::S4, 0), Some(1));
        assert_eq!(h("[1][1]p", FrameClass::S5, 0), None);
        assert_eq!(h("[+1 2]p", FrameClass::T, 3), Some(3));
        assert_eq!(h("[1][+1 2]p", FrameClass::T, 3), Some(4));
        assert_eq!(h("[+1][1]p", FrameClass::K, 1), None);
    }
}
