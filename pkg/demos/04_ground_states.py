"""Ground states of all three benchmark models at two layers."""

from ecvqe import io

# Each bundled config runs exactly as `ecvqe run <name>` would.
for name in ("ising_L8_ground", "potts_L4_ground", "schwinger_L8_ground"):
    rec = io.run(io.load_config(name), outdir="demo_runs")
    s = rec.summary
    print(f"\n{name}")
    for d in s["states"][0]["per_depth"]:
        print(f"  N={d['N']}: E={d['energy']:.6f} after {d['iterations']} QNG iterations")
    print(f"  exact {s['reference']:.6f}, relative error {s['rel_error']:.2e}")
    print(f"  symmetry labels {s['states'][0]['labels']}")
