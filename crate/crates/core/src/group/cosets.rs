//! Right-coset labels, the signed permutation representation, double
//! cosets, and orbits of coset triples.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use super::{builtin_matrices, generate_closure, Builtins, CosetLabel, GroupElement, MatrixGroup};
use crate::{Error, Result};

/// Image of the six unbarred labels under the right action; barred labels
/// map to the barred images (bars commute with the action).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    pub images: [CosetLabel; 6],
}

impl SignedPermutation {
    pub fn identity() -> SignedPermutation {
        SignedPermutation {
            images: std::array::from_fn(|i| CosetLabel::unbarred(i as u8 + 1)),
        }
    }

    pub fn act(&self, label: CosetLabel) -> CosetLabel {
        let image = self.images[label.index as usize - 1];
        if label.barred {
            image.bar()
        } else {
            image
        }
    }

    /// The permutation of acting first by `self`, then by `other`.
    pub fn then(&self, other: &SignedPermutation) -> SignedPermutation {
        SignedPermutation {
            images: self.images.map(|l| other.act(l)),
        }
    }

    pub fn bar_count(&self) -> usize {
        self.images.iter().filter(|l| l.barred).count()
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = (1..=6)
            .map(|i| format!("{}->{}", i, self.images[i - 1]))
            .collect();
        write!(f, "[{}]", body.join(", "))
    }
}

/// An unordered set of three distinct coset labels, stored sorted.
#[derive(
    Debug,
    Clone,
    Copy,
    PartialEq,
    Eq,
    Hash,
    PartialOrd,
    Ord,
    serde::Serialize,
    serde::Deserialize,
)]
pub struct Triple {
    labels: [CosetLabel; 3],
}

impl Triple {
    pub fn new(a: CosetLabel, b: CosetLabel, c: CosetLabel) -> Result<Triple> {
        let mut labels = [a, b, c];
        labels.sort();
        if labels[0] == labels[1] || labels[1] == labels[2] {
            return Err(Error::InvalidTriple(format!(
                "labels {a}, {b}, {c} are not distinct"
            )));
        }
        Ok(Triple { labels })
    }

    pub fn labels(&self) -> [CosetLabel; 3] {
        self.labels
    }

    pub fn contains(&self, l: CosetLabel) -> bool {
        self.labels.contains(&l)
    }

    /// No pair {i, i-bar} inside the set.
    pub fn is_coherent(&self) -> bool {
        !self.labels.iter().any(|l| self.labels.contains(&l.bar()))
    }

    pub fn acted_by(&self, p: &SignedPermutation) -> Triple {
        let [a, b, c] = self.labels;
        Triple::new(p.act(a), p.act(b), p.act(c)).expect("action preserves distinctness")
    }

    /// Every 3-subset of the twelve labels.
    pub fn all() -> Vec<Triple> {
        let all = CosetLabel::all();
        let mut out = Vec::new();
        for i in 0..12 {
            for j in i + 1..12 {
                for k in j + 1..12 {
                    out.push(Triple::new(all[i], all[j], all[k]).expect("distinct"));
                }
            }
        }
        out
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // unbarred labels high-to-low first, matching the {6,5,4b}
        // convention
        let mut shown = self.labels;
        shown.sort_by_key(|l| (l.barred, std::cmp::Reverse(l.index)));
        write!(f, "{{{},{},{}}}", shown[0], shown[1], shown[2])
    }
}

impl FromStr for Triple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Triple> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::InvalidTriple(format!(
                "expected three comma-separated labels, got {s:?}"
            )));
        }
        Triple::new(parts[0].parse()?, parts[1].parse()?, parts[2].parse()?)
    }
}

/// A double coset of the symmetric subgroup inside the invariance group.
#[derive(Debug, Clone)]
pub struct DoubleCoset {
    /// Lexicographically least member.
    pub representative: GroupElement,
    pub size: usize,
    pub members: Vec<GroupElement>,
}

/// A transporter element together with the ordered label correspondence it
/// induces from source to target.
#[derive(Debug, Clone)]
pub struct Transporter {
    pub element: GroupElement,
    /// (source label, its image) for each label of the source triple.
    pub images: [(CosetLabel, CosetLabel); 3],
}

/// The three groups with all coset data precomputed: labels and signed
/// permutations for every element of the governing group, plus the double
/// coset partition of the invariance group.
pub struct CosetTable {
    pub builtins: Builtins,
    pub sigma: MatrixGroup,
    pub g_l: MatrixGroup,
    pub m_l: MatrixGroup,
    phis: HashMap<GroupElement, SignedPermutation>,
    double_cosets: Vec<DoubleCoset>,
    /// invariance type (1..6) per double coset, aligned with
    /// `double_cosets`.
    types: Vec<u8>,
}

impl CosetTable {
    pub fn build() -> Result<CosetTable> {
        let builtins = builtin_matrices();
        let sigma = generate_closure(&builtins.sigma_generators(), 480)?;
        let g_l = generate_closure(&builtins.g_l_generators(), 19200)?;
        let m_l = generate_closure(&builtins.m_l_generators(), 230_400)?;

        // label of an arbitrary element, from scratch: the unique l with
        // mu * rep(l)^{-1} in the invariance group
        let rep_invs: Vec<(CosetLabel, GroupElement)> = CosetLabel::all()
            .iter()
            .map(|&l| Ok((l, builtins.representative(l).inverse()?)))
            .collect::<Result<_>>()?;
        let label_raw = |mu: &GroupElement| -> Result<CosetLabel> {
            let mut found = None;
            for (l, inv) in &rep_invs {
                if g_l.contains(&mu.mul(inv)) {
                    if found.is_some() {
                        return Err(Error::Invalid(format!(
                            "element belongs to two right cosets ({found:?} and {l})"
                        )));
                    }
                    found = Some(*l);
                }
            }
            found.ok_or(Error::NotInGroup)
        };

        // signed permutation of each generator, then propagate along the
        // closure order by composition
        let gens = builtins.m_l_generators();
        let mut gen_phis = Vec::with_capacity(gens.len());
        for g in &gens {
            let images: [CosetLabel; 6] = {
                let mut out = [CosetLabel::unbarred(1); 6];
                for i in 1..=6u8 {
                    out[i as usize - 1] =
                        label_raw(&builtins.mu[i as usize - 1].mul(g))?;
                }
                out
            };
            gen_phis.push(SignedPermutation { images });
        }
        let mut phis = HashMap::with_capacity(m_l.order());
        phis.insert(GroupElement::identity(), SignedPermutation::identity());
        for x in m_l.elements() {
            let px = *phis.get(x).ok_or_else(|| {
                Error::Invalid("closure order did not reach an element before its products".into())
            })?;
            for (g, pg) in gens.iter().zip(&gen_phis) {
                phis.entry(x.mul(g)).or_insert_with(|| px.then(pg));
            }
        }

        let (double_cosets, types) = partition_double_cosets(&g_l, &sigma, &builtins);
        Ok(CosetTable {
            builtins,
            sigma,
            g_l,
            m_l,
            phis,
            double_cosets,
            types,
        })
    }

    /// A process-wide table, built once on first use.
    pub fn shared() -> &'static CosetTable {
        static TABLE: OnceLock<CosetTable> = OnceLock::new();
        TABLE.get_or_init(|| CosetTable::build().expect("builtin group data is consistent"))
    }

    /// The unique label i with mu in (invariance group) * mu_i.
    pub fn coset_label(&self, mu: &GroupElement) -> Result<CosetLabel> {
        self.permutation_rep(mu)
            .map(|p| p.act(CosetLabel::unbarred(6)))
    }

    /// The signed permutation i -> label(mu_i * mu).
    pub fn permutation_rep(&self, mu: &GroupElement) -> Result<SignedPermutation> {
        self.phis.get(mu).copied().ok_or(Error::NotInGroup)
    }

    /// Double cosets of the symmetric subgroup in the invariance group,
    /// sorted by (size, representative).
    pub fn double_cosets(&self) -> &[DoubleCoset] {
        &self.double_cosets
    }

    /// The paper-order type (1..6) of the double coset containing mu.
    pub fn invariance_type(&self, mu: &GroupElement) -> Result<u8> {
        for (dc, &t) in self.double_cosets.iter().zip(&self.types) {
            if dc.members.binary_search(mu).is_ok() {
                return Ok(t);
            }
        }
        Err(Error::NotInGroup)
    }

    /// Orbits of the right action on all 220 triples:
    /// (coherent orbit, incoherent orbit).
    pub fn triple_orbits(&self) -> (Vec<Triple>, Vec<Triple>) {
        let gen_phis: Vec<SignedPermutation> = self
            .builtins
            .m_l_generators()
            .iter()
            .map(|g| self.phis[g])
            .collect();
        let orbit = |start: Triple| -> Vec<Triple> {
            let mut seen = std::collections::HashSet::new();
            let mut order = vec![start];
            seen.insert(start);
            let mut head = 0;
            while head < order.len() {
                let t = order[head];
                head += 1;
                for p in &gen_phis {
                    let t2 = t.acted_by(p);
                    if seen.insert(t2) {
                        order.push(t2);
                    }
                }
            }
            order
        };
        let coherent = orbit(coherent_base());
        let incoherent = orbit(incoherent_base());
        (coherent, incoherent)
    }

    /// First element in closure order carrying `source` to `target`
    /// (setwise), with the induced ordered label correspondence. The
    /// identity-first ordering makes the stabilizing case return the
    /// identity.
    pub fn find_transporter(&self, source: &Triple, target: &Triple) -> Result<Transporter> {
        for mu in self.m_l.elements() {
            let p = &self.phis[mu];
            if &source.acted_by(p) == target {
                let images = source.labels().map(|l| (l, p.act(l)));
                return Ok(Transporter {
                    element: *mu,
                    images,
                });
            }
        }
        Err(Error::NoTransporter)
    }
}

/// Base triple of the coherent orbit.
pub fn coherent_base() -> Triple {
    Triple::new(
        CosetLabel::unbarred(6),
        CosetLabel::unbarred(5),
        CosetLabel::unbarred(4),
    )
    .expect("distinct")
}

/// Base triple of the incoherent orbit.
pub fn incoherent_base() -> Triple {
    Triple::new(
        CosetLabel::unbarred(6),
        CosetLabel::unbarred(5),
        CosetLabel::barred(6),
    )
    .expect("distinct")
}

fn partition_double_cosets(
    g_l: &MatrixGroup,
    sigma: &MatrixGroup,
    builtins: &Builtins,
) -> (Vec<DoubleCoset>, Vec<u8>) {
    let mut assigned: HashMap<GroupElement, usize> = HashMap::with_capacity(g_l.order());
    let mut classes: Vec<DoubleCoset> = Vec::new();
    for x in g_l.elements() {
        if assigned.contains_key(x) {
            continue;
        }
        let mut members = std::collections::HashSet::new();
        for s in sigma.elements() {
            let sx = s.mul(x);
            for t in sigma.elements() {
                members.insert(sx.mul(t));
            }
        }
        let id = classes.len();
        let mut members: Vec<GroupElement> = members.into_iter().collect();
        members.sort();
        for m in &members {
            assigned.insert(*m, id);
        }
        classes.push(DoubleCoset {
            representative: members[0],
            size: members.len(),
            members,
        });
    }
    // paper types before re-sorting
    let mut type_of_class = vec![0u8; classes.len()];
    for (t, rep) in builtins.invariance_reps.iter().enumerate() {
        if let Some(&cls) = assigned.get(rep) {
            type_of_class[cls] = t as u8 + 1;
        }
    }
    let mut pairs: Vec<(DoubleCoset, u8)> = classes.into_iter().zip(type_of_class).collect();
    pairs.sort_by_key(|(c, _)| (c.size, c.representative));
    let types = pairs.iter().map(|(_, t)| *t).collect();
    let sorted = pairs.into_iter().map(|(c, _)| c).collect();
    (sorted, types)
}
