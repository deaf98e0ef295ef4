use std::ops::Range;

use super::ModelError;

/// Which multi-depot variant an instance encodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Closed routes, capacity and duration limits, per-depot fleet.
    Mdvrp,
    /// Mdvrp plus customer and depot time windows.
    Mdvrptw,
    /// Open routes: vehicles do not return to a depot.
    Mdovrp,
}

impl Variant {
    pub fn has_time_windows(self) -> bool {
        matches!(self, Variant::Mdvrptw)
    }

    pub fn open_routes(self) -> bool {
        matches!(self, Variant::Mdovrp)
    }

    /// Whether a reversed subsequence always evaluates like the forward one.
    pub fn symmetric(self) -> bool {
        !self.has_time_windows()
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Mdvrp => "mdvrp",
            Variant::Mdvrptw => "mdvrptw",
            Variant::Mdovrp => "mdovrp",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mdvrp" => Ok(Variant::Mdvrp),
            "mdvrptw" => Ok(Variant::Mdvrptw),
            "mdovrp" => Ok(Variant::Mdovrp),
            other => Err(ModelError::InvalidInstance(format!(
                "unknown variant `{other}` (expected mdvrp, mdvrptw or mdovrp)"
            ))),
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Depot,
    Customer,
}

/// A depot or customer. Depots carry zero demand and zero service time.
#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    /// Identifier used in external files; internal indices are positional.
    pub label: usize,
    pub kind: NodeKind,
    pub x: f64,
    pub y: f64,
    pub demand: f64,
    pub service: f64,
    pub earliest: f64,
    pub latest: f64,
}

impl Node {
    pub fn depot(label: usize, x: f64, y: f64) -> Self {
        Node {
            label,
            kind: NodeKind::Depot,
            x,
            y,
            demand: 0.0,
            service: 0.0,
            earliest: 0.0,
            latest: f64::INFINITY,
        }
    }

    pub fn customer(label: usize, x: f64, y: f64, demand: f64, service: f64) -> Self {
        Node {
            label,
            kind: NodeKind::Customer,
            x,
            y,
            demand,
            service,
            earliest: 0.0,
            latest: f64::INFINITY,
        }
    }

    pub fn with_window(mut self, earliest: f64, latest: f64) -> Self {
        self.earliest = earliest;
        self.latest = latest;
        self
    }
}

/// Immutable problem data. Depots occupy indices `0..num_depots`, customers
/// follow. Distance and travel-time matrices are dense and symmetric.
#[derive(Clone, Debug)]
pub struct Instance {
    name: String,
    variant: Variant,
    nodes: Vec<Node>,
    num_depots: usize,
    dist: Vec<f64>,
    time: Vec<f64>,
    fleet_per_depot: Option<usize>,
    capacity: f64,
    max_duration: Option<f64>,
}

/// Fleet and vehicle limits shared by every depot.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FleetLimits {
    /// `None` when the fleet size is unlimited.
    pub vehicles_per_depot: Option<usize>,
    pub capacity: f64,
    /// `None` when route duration is unlimited.
    pub max_duration: Option<f64>,
}

impl Instance {
    /// Builds an instance with Euclidean distances; travel times equal distances.
    pub fn euclidean(
        name: impl Into<String>,
        variant: Variant,
        depots: Vec<Node>,
        customers: Vec<Node>,
        limits: FleetLimits,
    ) -> Result<Self, ModelError> {
        let n = depots.len() + customers.len();
        let mut dist = vec![0.0; n * n];
        let all: Vec<&Node> = depots.iter().chain(customers.iter()).collect();
        for i in 0..n {
            for j in (i + 1)..n {
                let d = ((all[i].x - all[j].x).powi(2) + (all[i].y - all[j].y).powi(2)).sqrt();
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        let time = dist.clone();
        Self::with_matrices(name, variant, depots, customers, limits, dist, time)
    }

    /// Builds an instance from explicit row-major matrices.
    pub fn with_matrices(
        name: impl Into<String>,
        variant: Variant,
        depots: Vec<Node>,
        customers: Vec<Node>,
        limits: FleetLimits,
        dist: Vec<f64>,
        time: Vec<f64>,
    ) -> Result<Self, ModelError> {
        if depots.is_empty() {
            return Err(ModelError::InvalidInstance("at least one depot is required".into()));
        }
        if customers.is_empty() {
            return Err(ModelError::InvalidInstance("at least one customer is required".into()));
        }
        let num_depots = depots.len();
        let mut nodes = depots;
        for d in &mut nodes {
            d.kind = NodeKind::Depot;
            d.demand = 0.0;
            d.service = 0.0;
        }
        nodes.extend(customers.into_iter().map(|mut c| {
            c.kind = NodeKind::Customer;
            c
        }));
        let n = nodes.len();
        if dist.len() != n * n || time.len() != n * n {
            return Err(ModelError::InvalidInstance(format!(
                "matrices must be {n}x{n} ({} entries)",
                n * n
            )));
        }
        for i in 0..n {
            if dist[i * n + i] != 0.0 || time[i * n + i] != 0.0 {
                return Err(ModelError::InvalidInstance(format!("nonzero diagonal at node {i}")));
            }
            for j in (i + 1)..n {
                if dist[i * n + j] != dist[j * n + i] || time[i * n + j] != time[j * n + i] {
                    return Err(ModelError::InvalidInstance(format!(
                        "asymmetric matrix entry ({i}, {j})"
                    )));
                }
                if dist[i * n + j] < 0.0 || time[i * n + j] < 0.0 {
                    return Err(ModelError::InvalidInstance(format!("negative matrix entry ({i}, {j})")));
                }
            }
        }
        for (i, node) in nodes.iter_mut().enumerate() {
            if !variant.has_time_windows() {
                node.earliest = 0.0;
                node.latest = f64::INFINITY;
            }
            if node.demand < 0.0 || node.service < 0.0 {
                return Err(ModelError::InvalidInstance(format!(
                    "negative demand or service at node {i}"
                )));
            }
            if node.earliest > node.latest {
                return Err(ModelError::InvalidInstance(format!("empty time window at node {i}")));
            }
        }
        if !(limits.capacity > 0.0) {
            return Err(ModelError::InvalidInstance("capacity must be positive".into()));
        }
        if matches!(limits.max_duration, Some(d) if !(d > 0.0)) {
            return Err(ModelError::InvalidInstance("max duration must be positive".into()));
        }
        // Open routes drop the fleet and duration limits.
        let (fleet_per_depot, max_duration) = if variant.open_routes() {
            (None, None)
        } else {
            (limits.vehicles_per_depot, limits.max_duration)
        };
        Ok(Instance {
            name: name.into(),
            variant,
            nodes,
            num_depots,
            dist,
            time,
            fleet_per_depot,
            capacity: limits.capacity,
            max_duration,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn open_routes(&self) -> bool {
        self.variant.open_routes()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &Node {
        &self.nodes[i]
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_depots(&self) -> usize {
        self.num_depots
    }

    pub fn num_customers(&self) -> usize {
        self.nodes.len() - self.num_depots
    }

    pub fn depots(&self) -> Range<usize> {
        0..self.num_depots
    }

    pub fn customers(&self) -> Range<usize> {
        self.num_depots..self.nodes.len()
    }

    pub fn is_depot(&self, i: usize) -> bool {
        i < self.num_depots
    }

    pub fn is_customer(&self, i: usize) -> bool {
        i >= self.num_depots && i < self.nodes.len()
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.nodes.len() + j]
    }

    #[inline]
    pub fn time(&self, i: usize, j: usize) -> f64 {
        self.time[i * self.nodes.len() + j]
    }

    pub fn fleet_per_depot(&self) -> Option<usize> {
        self.fleet_per_depot
    }

    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    pub fn max_duration(&self) -> Option<f64> {
        self.max_duration
    }

    /// Depot closest to `node` by distance, ties to the smaller index.
    pub fn nearest_depot(&self, node: usize) -> usize {
        let mut best = 0;
        for d in self.depots() {
            if self.dist(node, d) < self.dist(node, best) {
                best = d;
            }
        }
        best
    }

    /// Internal index of the node carrying an external label.
    pub fn index_of_label(&self, label: usize) -> Option<usize> {
        self.nodes.iter().position(|n| n.label == label)
    }
}
