import numpy as np
import itertools

def aklt_tensor(mu):
    A = np.zeros((3, 2, 2), dtype=complex)
    A[0, 1, 0] = -np.sqrt(mu)
    A[2, 0, 1] = np.sqrt(mu)
    A[1, 0, 0] = 1/np.sqrt(2)
    A[1, 1, 1] = -mu/np.sqrt(2)
    return A

def left_partner(A): return np.transpose(A, (0, 2, 1))

def transfer(Abra, Aket, op=None):
    d = Abra.shape[0]
    Da, Db = Abra.shape[1], Aket.shape[1]
    E = np.zeros((Da*Db, Da*Db), dtype=complex)
    if op is None:
        for i in range(d):
            E += np.kron(np.conj(Abra[i]), Aket[i])
    else:
        for i in range(d):
            for j in range(d):
                if op[i, j] != 0:
                    E += op[i, j]*np.kron(np.conj(Abra[i]), Aket[j])
    return E

def dominant(E):
    ev, V = np.linalg.eig(E)
    i = np.argmax(np.abs(ev))
    lam = ev[i]
    r = V[:, i]
    W = np.linalg.inv(V)
    l = W[i, :].conj()          # row i of V^-1 => l^dag r = 1
    return lam, r, l

Sx = np.array([[0,1,0],[1,0,1],[0,1,0]])/np.sqrt(2)
Sy = np.array([[0,-1j,0],[1j,0,-1j],[0,1j,0]])/np.sqrt(2)
Sz = np.diag([1.0,0.0,-1.0]).astype(complex)
Sp = Sx + 1j*Sy; Sm = Sx - 1j*Sy
I3 = np.eye(3, dtype=complex)

def expectation_lr(mu, op2):
    """two-site op in LR sandwich"""
    A = aklt_tensor(mu); L = left_partner(A)
    E = transfer(L, A)
    lam, r, l = dominant(E)
    # E_O for 2-site op: sum_{pq} O[p,q] kron(conj chain L), chain A
    D2 = E.shape[0]
    EO = np.zeros((D2, D2), dtype=complex)
    for p1, p2, q1, q2 in itertools.product(range(3), repeat=4):
        c = op2[p1*3+p2, q1*3+q2]
        if c != 0:
            EO += c*np.kron(np.conj(L[p1]@L[p2]), A[q1]@A[q2])
    return (l.conj() @ EO @ r) / lam**2

print("--- order parameters LR ---")
O_af = np.kron(Sz, Sz)
O_left = 0.5*np.kron(Sp, Sm)
O_right = 0.5*np.kron(Sm, Sp)
for mu in [0.5, 1.0, 2.0]:
    oaf = expectation_lr(mu, O_af)
    ol = expectation_lr(mu, O_left)
    orr = expectation_lr(mu, O_right)
    print(f"mu={mu}: O_AF={oaf:.12f} (want {-4/9:.12f}) O_left={ol:.12f} (want {-4*mu/9:.12f}) O_right={orr:.12f} (want {-4/(9*mu):.12f})")

print("\n--- string order ---")
def string_order(mu, m, mode="lr"):
    A = aklt_tensor(mu)
    bra = left_partner(A) if mode == "lr" else A
    E = transfer(bra, A)
    lam, r, l = dominant(E)
    P = np.diag([-1.0, 1.0, -1.0]).astype(complex)  # e^{i pi Sz}
    ESz = transfer(bra, A, Sz)
    EP = transfer(bra, A, P)
    M = ESz @ np.linalg.matrix_power(EP, m-2) @ ESz
    return (l.conj() @ M @ r) / lam**m

for mu in [0.5, 1.0, 2.0]:
    print(f"mu={mu} LR: m=2: {string_order(mu,2):.10f} m=6: {string_order(mu,6):.10f} m=10: {string_order(mu,10):.10f}")
for mu in [0.2, 5.0]:
    print(f"mu={mu} LR: m=2: {abs(string_order(mu,2)):.2e} m=40: {abs(string_order(mu,40)):.2e}")
for mu in [0.5, 1.0, 2.0]:
    v30, v40 = string_order(mu,30,"rr"), string_order(mu,40,"rr")
    print(f"mu={mu} RR: m=4: {string_order(mu,4,'rr'):.10f} m=30: {v30:.10f} m=40: {v40:.10f} |sat|<4/9: {abs(v40) < 4/9}")

print("\n--- entanglement spectrum of Phi_mu ---")
def ent_spectrum(mu):
    A = aklt_tensor(mu)
    E = transfer(A, A)
    lam, r, l = dominant(E)
    D = A.shape[1]
    R = r.reshape(D, D)      # [bra alpha, ket beta]
    Lm = l.reshape(D, D)
    rho_r = np.conj(R)       # fixed point of CP map
    rho_l = Lm.T             # check hermiticity below
    def fix(rho):
        tr = np.trace(rho)
        rho = rho / (tr/abs(tr))
        rho = 0.5*(rho + rho.conj().T)
        return rho
    rho_r, rho_l = fix(rho_r), fix(rho_l)
    er, Ur = np.linalg.eigh(rho_r)
    el, Ul = np.linalg.eigh(rho_l)
    Y = Ur @ np.diag(np.sqrt(np.maximum(er, 0)))
    X = np.diag(np.sqrt(np.maximum(el, 0))) @ Ul.conj().T
    s = np.linalg.svd(X @ Y, compute_uv=False)
    p = s**2 / np.sum(s**2)
    return np.sort(p)[::-1]

def ent_finite(mu, n=12):
    A = aklt_tensor(mu)
    bl = np.array([1.0, 0.3]); br = np.array([0.7, 1.0])
    psi = None
    # build OBC state vector
    vecs = {(): None}
    # iterative: v[alpha] matrices
    cur = [bl.astype(complex)]
    # represent partial contraction as array over physical indices: start vector bl
    V = bl.astype(complex).reshape(1, 2)
    for site in range(n):
        V2 = np.zeros((V.shape[0]*3, 2), dtype=complex)
        for i in range(3):
            V2[i*V.shape[0]:(i+1)*V.shape[0], :] = V @ aklt_tensor(mu)[i]
        # careful: ordering must be site-major for first index; fix below by building differently
        V = V2
    # The ordering above interleaves wrong; rebuild straightforwardly
    dim = 3**n
    psi = np.zeros(dim, dtype=complex)
    A = aklt_tensor(mu)
    def rec(prefix_mat, depth, idx):
        if depth == n:
            psi[idx] = prefix_mat @ br
            return
        for i in range(3):
            rec(prefix_mat @ A[i], depth+1, idx*3 + i)
    rec(bl.astype(complex), 0, 0)
    M = psi.reshape(3**(n//2), 3**(n//2))
    s = np.linalg.svd(M, compute_uv=False)
    p = s**2/np.sum(s**2)
    return np.sort(p)[::-1][:4]

for mu in [0.5, 1.0, 2.0]:
    pi_inf = ent_spectrum(mu)
    pi_fin = ent_finite(mu, 12)
    print(f"mu={mu}: infinite={np.round(pi_inf,8)} finite-12={np.round(pi_fin,8)} diff={np.max(np.abs(pi_inf - pi_fin[:2])):.2e}")

print("\n--- infidelity AKLT vs product |0> ---")
A = aklt_tensor(1.0)
lamA = dominant(transfer(A, A))[0]
An = A / np.sqrt(lamA)
B = np.zeros((3,1,1), dtype=complex); B[1,0,0] = 1.0
Emix = transfer(B, An)   # bra = product, ket = AKLT
lmix = np.max(np.abs(np.linalg.eigvals(Emix)))
print("infidelity =", 1 - lmix, "expected", 1 - 1/np.sqrt(3))

print("\n--- PBC finite-vs-thermo convergence (criterion 8 style) ---")
def materialize_pbc(A, n):
    dim = 3**n
    psi = np.zeros(dim, dtype=complex)
    def rec(mat, depth, idx):
        if depth == n:
            psi[idx] = np.trace(mat)
            return
        for i in range(3):
            rec(mat @ A[i], depth+1, idx*3+i)
    rec(np.eye(2, dtype=complex), 0, 0)
    return psi

def embed2(op, n, pos):
    return np.kron(np.kron(np.eye(3**pos), op), np.eye(3**(n-pos-2)))

for mu in [0.7, 1.0, 1.5]:
    A = aklt_tensor(mu); L = left_partner(A)
    thermo = expectation_lr(mu, O_af)
    errs = []
    for n in [6,7,8,9]:
        R = materialize_pbc(A, n); Lv = materialize_pbc(L, n)
        O = embed2(O_af, n, 0)
        val = (Lv.conj() @ O @ R)/(Lv.conj() @ R)
        errs.append(abs(val - thermo))
    E = transfer(L, A)
    ev = np.sort(np.abs(np.linalg.eigvals(E)))[::-1]
    ratio_bound = ev[1]/ev[0]
    ratios = [errs[i+1]/errs[i] for i in range(3)]
    print(f"mu={mu}: errs={['%.3e'%e for e in errs]} ratios={['%.3f'%r for r in ratios]} bound={ratio_bound:.3f}")
