import numpy as np, itertools

def aklt_tensor(mu):
    A = np.zeros((3, 2, 2), dtype=complex)
    A[0, 1, 0] = -np.sqrt(mu); A[2, 0, 1] = np.sqrt(mu)
    A[1, 0, 0] = 1/np.sqrt(2); A[1, 1, 1] = -mu/np.sqrt(2)
    return A
def left_partner(A): return np.transpose(A, (0, 2, 1))
def blocked_map(A, k):
    d, D, _ = A.shape
    T = np.zeros((d**k, D*D), dtype=complex)
    for phys in itertools.product(range(d), repeat=k):
        M = np.eye(D, dtype=complex)
        for i in phys: M = M @ A[i]
        row = 0
        for i in phys: row = row*d + i
        T[row,:] = M.reshape(-1)
    return T
def projector(mu, k):
    A = aklt_tensor(mu); L = left_partner(A)
    TR, TL = blocked_map(A,k), blocked_map(L,k)
    G = TL.conj().T @ TR
    return np.eye(3**k) - TR @ np.linalg.inv(G) @ TL.conj().T, TR

def transfer(Ab, Ak):
    E = np.zeros((Ab.shape[1]*Ak.shape[1], Ab.shape[2]*Ak.shape[2]), dtype=complex)
    for i in range(Ab.shape[0]): E += np.kron(np.conj(Ab[i]), Ak[i])
    return E

d = 3
FLOOR = 1e-14

class Cell:
    """site_tensors X_i (right-weighted, X=T G), schmidt weights G_i on bond i (right of site i)."""
    def __init__(self, X, G):
        self.X = X  # list of arrays (chi_left, d, chi_right)
        self.G = G  # list of 1d arrays

def random_cell(k, Dmax, seed):
    rng = np.random.default_rng(seed)
    X = [ (rng.uniform(-1,1,(Dmax,d,Dmax)) + 1j*rng.uniform(-1,1,(Dmax,d,Dmax))) for _ in range(k) ]
    X = [ x/np.linalg.norm(x) for x in X ]
    G = [ np.ones(Dmax)/np.sqrt(Dmax) for _ in range(k) ]
    return Cell(X, G)

def window_update(cell, gate, offset, Dmax):
    k = len(cell.X)
    sites = [(offset+j) % k for j in range(k)]
    bond_left = (offset + k - 1) % k     # bond to the left of sites[0] == bond of sites[-1]
    # theta_free: contract X chain -> W[a, p, b], p slow-to-fast over sites
    W = cell.X[sites[0]]                 # (a, d, chi)
    a0 = W.shape[0]
    W = W.reshape(a0*d, -1)
    pdim = d
    for j in range(1, k):
        Xj = cell.X[sites[j]]            # (chi, d, chi2)
        W = W @ Xj.reshape(Xj.shape[0], -1)   # (a0*pdim, d*chi2)
        pdim *= d
        W = W.reshape(a0*pdim, -1)
    b0 = W.shape[1]
    # W: (a0*pdim, b0) with row index (a, p)
    Wt = W.reshape(a0, pdim, b0)
    # apply gate on p
    Yk = np.einsum('pq,aqb->apb', gate, Wt)
    Yk = Yk / np.linalg.norm(Yk)
    # theta with left weights
    theta = Yk * cell.G[bond_left][:, None, None]
    # chain of splits
    prevY = Yk                            # (chi_prev, d^{k-j}, b)
    M = theta
    for j in range(k-1):
        chi_l = M.shape[0]
        rest = M.shape[1] // d
        Mm = M.reshape(chi_l*d, rest*b0)
        U, s, Vh = np.linalg.svd(Mm, full_matrices=False)
        keep = min(Dmax, int(np.sum(s > FLOOR)))
        keep = max(keep, 1)
        s = s[:keep]; Vh = Vh[:keep, :]
        w = s / np.linalg.norm(s)
        cell.G[sites[j]] = w
        Ynext = Vh.reshape(keep, rest, b0)
        # X'_{s_j} = prevY . Ynext^dagger over (rest physical, b)
        newX = np.einsum('aqb,cqb->aqc' if False else 'apb,cpb->ac...', prevY.reshape(prevY.shape[0], d, rest, b0), np.conj(Ynext).reshape(keep, 1, rest, b0)) if False else None
        pY = prevY.reshape(prevY.shape[0], d, rest, b0)
        newX = np.einsum('aiqb,cqb->aic', pY, np.conj(Ynext))
        cell.X[sites[j]] = newX / np.linalg.norm(newX)
        prevY = Ynext
        M = w[:, None] * Vh.reshape(keep, -1)
        M = M.reshape(keep, rest, b0)
    # last site: X' = Y_1
    lastY = prevY.reshape(prevY.shape[0], d, b0)
    cell.X[sites[k-1]] = lastY / np.linalg.norm(lastY)

def sweep(cell, gate, Dmax):
    k = len(cell.X)
    old = [g.copy() for g in cell.G]
    for o in range(k):
        window_update(cell, gate, o, Dmax)
    e = 0.0
    for i in range(k):
        a, b = cell.G[i], old[i]
        n = max(len(a), len(b))
        pa = np.zeros(n); pa[:len(a)] = np.sort(a)[::-1]
        pb = np.zeros(n); pb[:len(b)] = np.sort(b)[::-1]
        e += np.sum((pa-pb)**2)
    return e

def to_uniform(cell):
    k = len(cell.X)
    # boundary bond = bond k-1 (right of last site)
    w = cell.G[k-1]
    B = cell.X[0]
    pdim = d
    a0 = B.shape[0]
    B = B.reshape(a0*d, -1)
    for j in range(1, k):
        Xj = cell.X[j]
        B = B @ Xj.reshape(Xj.shape[0], -1)
        pdim *= d
        B = B.reshape(a0*pdim, -1)
    b0 = B.shape[1]
    Bt = B.reshape(a0, pdim, b0)
    sq = np.sqrt(w)
    inv = np.array([1/x if x > FLOOR else 0.0 for x in sq**1])
    # A = diag(sqrt(w)) X1..Xk diag(1/sqrt(w))
    At = sq[:, None, None]*Bt*( (1.0/np.sqrt(np.where(w > FLOOR, w, 1.0)))[None, None, :] * (w > FLOOR)[None, None, :] )
    return np.transpose(At, (1, 0, 2))  # (p, a, b)

def infidelity(Aref, Acand):
    lr = np.max(np.abs(np.linalg.eigvals(transfer(Aref, Aref)))) if Aref.shape[1] > 1 else np.abs(transfer(Aref, Aref))[0,0]
    lc = np.max(np.abs(np.linalg.eigvals(transfer(Acand, Acand))))
    An = Aref/np.sqrt(lr); Bn = Acand/np.sqrt(lc)
    lm = np.max(np.abs(np.linalg.eigvals(transfer(An, Bn))))
    return 1 - lm

def blocked_state(A, k):
    d0, D, _ = A.shape
    out = np.zeros((d0**k, D, D), dtype=complex)
    for phys in itertools.product(range(d0), repeat=k):
        M = np.eye(D, dtype=complex)
        for i in phys: M = M @ A[i]
        row = 0
        for i in phys: row = row*d0 + i
        out[row] = M
    return out

def find_ground(mu, k, Dmax=12, dtau=5e-3, etol=1e-14, maxsteps=200000, adjoint=False, seed=7):
    Pi, TR = projector(mu, k)
    if adjoint: Pi = Pi.conj().T
    gate = np.eye(d**k) + (np.exp(-dtau)-1)*Pi
    cell = random_cell(k, Dmax, seed)
    for step in range(1, maxsteps+1):
        e = sweep(cell, gate, Dmax)
        if e < etol:
            return cell, step, e, True
    return cell, maxsteps, e, False

print("--- k=2 mu=1 ---")
cell, steps, e, ok = find_ground(1.0, 2, maxsteps=60000)
print("converged:", ok, "steps:", steps, "e:", e)
print("weights:", [np.round(g[:4],6) for g in cell.G])
A = to_uniform(cell)
ref = blocked_state(aklt_tensor(1.0), 2)
print("infidelity vs Phi_1:", infidelity(ref, A))

print("--- k=2 mu=0.6 fwd ---")
cell, steps, e, ok = find_ground(0.6, 2, maxsteps=60000)
A = to_uniform(cell)
print("converged:", ok, "steps:", steps, "infid vs Phi_0.6:", infidelity(blocked_state(aklt_tensor(0.6),2), A))

print("--- k=2 mu=1.6 fwd ---")
cell, steps, e, ok = find_ground(1.6, 2, maxsteps=60000)
A = to_uniform(cell)
print("converged:", ok, "steps:", steps, "infid vs Phi_1.6:", infidelity(blocked_state(aklt_tensor(1.6),2), A))

print("--- k=2 mu=0.6 adjoint ---")
cell, steps, e, ok = find_ground(0.6, 2, adjoint=True, maxsteps=60000)
A = to_uniform(cell)
print("converged:", ok, "steps:", steps, "infid vs Phi_{1/0.6}:", infidelity(blocked_state(aklt_tensor(1/0.6),2), A))

print("--- k=3 mu=1 ---")
cell, steps, e, ok = find_ground(1.0, 3, maxsteps=60000)
A = to_uniform(cell)
print("converged:", ok, "steps:", steps, "infid vs Phi_1 (3-blocked):", infidelity(blocked_state(aklt_tensor(1.0),3), A))

print("--- k=2 mu=0.25 (should fail / wrong state) ---")
cell, steps, e, ok = find_ground(0.25, 2, maxsteps=30000)
A = to_uniform(cell)
print("converged:", ok, "steps:", steps, "e:", e, "infid vs Phi_0.25:", infidelity(blocked_state(aklt_tensor(0.25),2), A))
