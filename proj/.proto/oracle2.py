import numpy as np
import itertools

def aklt_tensor(mu):
    A = np.zeros((3, 2, 2), dtype=complex)
    A[0, 1, 0] = -np.sqrt(mu)
    A[2, 0, 1] = np.sqrt(mu)
    A[1, 0, 0] = 1/np.sqrt(2)
    A[1, 1, 1] = -mu/np.sqrt(2)
    return A

def left_partner(A):
    return np.transpose(A, (0, 2, 1))

def blocked_map(A, k):
    d, D, _ = A.shape
    T = np.zeros((d**k, D*D), dtype=complex)
    for phys in itertools.product(range(d), repeat=k):
        M = np.eye(D, dtype=complex)
        for i in phys:
            M = M @ A[i]
        row = 0
        for i in phys:
            row = row*d + i
        T[row, :] = M.reshape(-1)
    return T

def projector(mu, k):
    A = aklt_tensor(mu)
    L = left_partner(A)
    TR = blocked_map(A, k)
    TL = blocked_map(L, k)
    G = TL.conj().T @ TR
    P = TR @ np.linalg.inv(G) @ TL.conj().T
    return np.eye(3**k) - P, TR, TL, G

def embed_sites(op, n, sites, d=3):
    """op acts on the given ordered site tuple; identity elsewhere."""
    k = len(sites)
    dim = d**n
    opT = op.reshape((d,)*k + (d,)*k)
    # start from op on sites 0..k-1
    rest = [s for s in range(n) if s not in sites]
    M = np.kron(op, np.eye(d**(n-k))).reshape((d,)*(2*n))
    # current axis order: out: sites[0..k-1] then rest; in: same
    cur = list(sites) + rest
    perm = [cur.index(s) for s in range(n)]
    M = M.transpose(perm + [n+p for p in perm])
    return M.reshape(dim, dim)

def chain(Pi, n, k, pbc, d=3):
    dim = d**n
    H = np.zeros((dim,dim), dtype=complex)
    last = n if pbc else n-k+1
    for i in range(last):
        sites = tuple((i+j) % n for j in range(k))
        H += embed_sites(Pi, n, sites, d)
    return H

def spectrum_report(H, tol=1e-7):
    ev = np.linalg.eigvals(H)
    idx = np.lexsort((np.abs(ev.imag), ev.real))
    ev = ev[idx]
    e0 = ev[0]
    deg = int(np.sum(np.abs(ev - e0) < tol))
    outside = [e for e in ev if abs(e - e0) >= tol]
    gap = (outside[0].real - e0.real) if outside else float('nan')
    return ev, e0, deg, gap

print("--- PBC N=3 k=2 (fixed embedding) ---")
for mu in [0.1, 0.2, 0.25, 0.26, 0.3, 0.5, 1.0, 2.0, 3.5, 4.0, 5.0, 10.0]:
    Pi = projector(mu,2)[0]
    H = chain(Pi, 3, 2, True)
    ev, e0, deg, gap = spectrum_report(H)
    cc = np.max(np.abs(np.sort_complex(ev)-np.sort_complex(ev.conj())))
    print(f"mu={mu}: E0={e0:.6f} deg={deg} gap={gap:.6f} conj={cc:.1e}")

print("\n--- PBC N=4..6 k=2, mu=1 sanity (AKLT unique PBC ground) ---")
for n in [4,5,6]:
    Pi = projector(1.0,2)[0]
    H = chain(Pi, n, 2, True)
    ev, e0, deg, gap = spectrum_report(H)
    print(f"n={n}: E0={e0:.2e} deg={deg} gap={gap:.6f}")

print("\n--- PBC N=4 k=3 ---")
for mu in [0.1, 0.2, 0.4, 0.45, 1.0, 2.5, 10.0]:
    Pi3 = projector(mu,3)[0]
    H = chain(Pi3, 4, 3, True)
    ev, e0, deg, gap = spectrum_report(H)
    print(f"mu={mu}: E0={e0:.6f} deg={deg} gap={gap:.6f}")

print("\n--- spectral duality H(mu) vs H(1/mu) PBC N=4 k=2 ---")
for mu in [0.4, 2.0]:
    H1 = chain(projector(mu,2)[0], 4, 2, True)
    H2 = chain(projector(1/mu,2)[0], 4, 2, True)
    e1 = np.sort_complex(np.linalg.eigvals(H1))
    e2 = np.sort_complex(np.linalg.eigvals(H2))
    print(f"mu={mu}: max|spec diff| = {np.max(np.abs(e1-e2)):.2e}")

print("\n--- OBC similarity check ---")
def similarity_distance(mu, n, k):
    Pi_mu = projector(mu,k)[0]
    Pi_1 = projector(1.0,k)[0]
    Hmu = chain(Pi_mu, n, k, False)
    H1 = chain(Pi_1, n, k, False)
    Sz = np.diag([1.0,0.0,-1.0])
    M = np.array([[1.0]])
    for j in range(1, n+1):
        M = np.kron(M, np.diag([mu**(j*m) for m in (1,0,-1)]))
    Hc = M @ H1 @ np.linalg.inv(M)
    d1 = np.max(np.abs(Hmu - Hc))
    e1 = np.sort_complex(np.linalg.eigvals(Hmu))
    e2 = np.sort_complex(np.linalg.eigvals(Hc))
    return d1, np.max(np.abs(e1-e2))

for (mu, n) in [(2.0,4),(0.2,5),(5.0,5)]:
    dm, de = similarity_distance(mu, n, 2)
    print(f"mu={mu} n={n}: matrix distance={dm:.2e} eig distance={de:.2e}")

print("\n--- gap scaling PBC ---")
def gaps_for(mu, k, ns):
    out = []
    for n in ns:
        H = chain(projector(mu,k)[0], n, k, True)
        ev, e0, deg, gap = spectrum_report(H)
        out.append(gap)
    return out

def quadfit(ns, gaps):
    x = np.array([1.0/n for n in ns])
    A = np.vstack([np.ones_like(x), x, x*x]).T
    coef, res, *_ = np.linalg.lstsq(A, np.array(gaps), rcond=None)
    return coef

for mu in [0.4, 0.45, 0.7, 1.0]:
    ns = [3,4,5,6,7]
    gs = gaps_for(mu, 2, ns)
    c = quadfit(ns, gs)
    print(f"k=2 mu={mu}: gaps={['%.4f'%g for g in gs]} extrapolated={c[0]:.5f}")
for mu in [0.4, 1.0]:
    ns = [4,5,6]
    gs = gaps_for(mu, 3, ns)
    c = quadfit(ns, gs)
    print(f"k=3 mu={mu}: gaps={['%.4f'%g for g in gs]} extrapolated={c[0]:.5f}")
