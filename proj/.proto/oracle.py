import numpy as np
import itertools

np.set_printoptions(precision=10, suppress=False, linewidth=200)

def aklt_tensor(mu):
    # physical order (+1, 0, -1); virtual (up=0, down=1)
    A = np.zeros((3, 2, 2), dtype=complex)
    A[0, 1, 0] = -np.sqrt(mu)      # A^[+1]_{down up}
    A[2, 0, 1] = np.sqrt(mu)       # A^[-1]_{up down}
    A[1, 0, 0] = 1/np.sqrt(2)      # A^[0]_{up up}
    A[1, 1, 1] = -mu/np.sqrt(2)    # A^[0]_{down down}
    return A

def left_partner(A):
    return np.transpose(A, (0, 2, 1))

def transfer(Abra, Aket):
    # E[(a b),(a' b')] = sum_i conj(Abra)[a a'] Aket[b b']
    d = Abra.shape[0]
    Da, Db = Abra.shape[1], Aket.shape[1]
    E = np.zeros((Da*Db, Da*Db), dtype=complex)
    for i in range(d):
        E += np.kron(np.conj(Abra[i]), Aket[i])
    return E

# 1. Transfer matrix check
for mu in [0.2, 1.0, 2.0]:
    A = aklt_tensor(mu)
    E = transfer(left_partner(A), A)
    expected = np.zeros((4,4))
    expected[0,0] = 0.5
    expected[1,1] = -mu/2; expected[1,2] = mu
    expected[2,1] = mu; expected[2,2] = -mu/2
    expected[3,3] = mu**2/2
    print("mu", mu, "E matches Eq10:", np.max(np.abs(E - expected)))
    print("  eig:", sorted(np.linalg.eigvals(E).real))

# 2. Blocked map, metric, projector
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
        T[row, :] = M.reshape(-1)  # (alpha, beta) row-major: alpha*D+beta
    return T

def projector(mu, k):
    A = aklt_tensor(mu)
    L = left_partner(A)
    TR = blocked_map(A, k)
    TL = blocked_map(L, k)
    G = TL.conj().T @ TR
    C = np.linalg.inv(G)
    P = TR @ C @ TL.conj().T
    return np.eye(3**k) - P, TR, TL, G

# spin-1 operators
Sx = np.array([[0,1,0],[1,0,1],[0,1,0]])/np.sqrt(2)
Sy = np.array([[0,-1j,0],[1j,0,-1j],[0,1j,0]])/np.sqrt(2)
Sz = np.diag([1.0,0.0,-1.0]).astype(complex)
Sp = Sx + 1j*Sy
Sm = Sx - 1j*Sy
I3 = np.eye(3, dtype=complex)

def eq12(mu):
    Spz = Sp@Sz + Sz@Sp
    Smz = Sm@Sz + Sz@Sm
    Sz2 = Sz@Sz
    H = (5/12)*( (mu/2)*np.kron(Sm,Sp) + (1/(2*mu))*np.kron(Sp,Sm) + np.kron(Sz,Sz) ) \
        + (2/3)*np.kron(I3,I3) \
        + (1/6)*( (mu**2/4)*np.kron(Sm@Sm, Sp@Sp) + (1/(4*mu**2))*np.kron(Sp@Sp, Sm@Sm) - np.kron(Sz2,I3) - np.kron(I3,Sz2) ) \
        + (1/24)*( mu*np.kron(Smz, Spz) + (1/mu)*np.kron(Spz, Smz) ) \
        + (1/4)*np.kron(Sz2, Sz2)
    return H

for mu in [0.3, 0.5, 1.0, 2.0, 3.3]:
    Pi, TR, TL, G = projector(mu, 2)
    H12 = eq12(mu)
    print("mu", mu, "|Pi - Eq12| =", np.max(np.abs(Pi - H12)),
          "annih:", np.max(np.abs(Pi@TR)), np.max(np.abs(TL.conj().T@Pi)),
          "eigs:", np.round(sorted(np.linalg.eigvals(Pi).real),8))

# hermitian at mu=1, equals spin-2 projector
Pi1 = projector(1.0, 2)[0]
Stot = [np.kron(S,I3)+np.kron(I3,S) for S in (Sx,Sy,Sz)]
S2 = sum(s@s for s in Stot)
P2 = S2@(S2 - 2*np.eye(9))/24
print("Pi(1) vs spin-2 projector:", np.max(np.abs(Pi1 - P2)), "herm:", np.max(np.abs(Pi1 - Pi1.conj().T)))

# dagger duality
Pi2 = projector(2.0,2)[0]
Pihalf = projector(0.5,2)[0]
print("Pi(2)^dag - Pi(0.5):", np.max(np.abs(Pi2.conj().T - Pihalf)))

# 3. lambda basis
Sxz = Sx@Sz + Sz@Sx
Syz = Sy@Sz + Sz@Sy
Sxy = Sx@Sy + Sy@Sx
Sx2, Sy2, Sz2m = Sx@Sx, Sy@Sy, Sz@Sz
lam = [ (Sx+Sxz)/2, (Sx-Sxz)/2, (Sy+Syz)/2, (Sy-Syz)/2, Sxy/np.sqrt(2),
        (Sz+3*Sz2m)/(2*np.sqrt(2)) - I3/np.sqrt(2), (Sx2-Sy2)/np.sqrt(2),
        (3*Sz-3*Sz2m+2*I3)/(2*np.sqrt(6)), I3/np.sqrt(3) ]
orth = np.array([[np.trace(a.conj().T@b) for b in lam] for a in lam])
print("lambda orthonormal:", np.max(np.abs(orth - np.eye(9))))

def expand_lambda(Pi):
    O = np.zeros((9,9), dtype=complex)
    for m in range(9):
        for n in range(9):
            O[m,n] = np.trace(np.kron(lam[m],lam[n]).conj().T @ Pi)
    return O

def sm_blocks(mu):
    O = np.zeros((9,9), dtype=complex)
    a = (mu**2+1)/(4*mu); b = (mu**2+1)/(6*mu)
    c = (mu**2-1)/(4*mu); e = (mu**2-1)/(6*mu)
    B1 = np.array([[a, b, 1j*c, 1j*e],
                   [b, a, 1j*e, 1j*c],
                   [-1j*c, -1j*e, a, b],
                   [-1j*e, -1j*c, b, a]])
    f = (mu**4+1)/(12*mu**2); g = (mu**4-1)/(12*mu**2)
    B2 = np.array([[f, 0, -1j*g, 0],
                   [0, 1/3, 0, np.sqrt(3)/6],
                   [1j*g, 0, f, 0],
                   [0, np.sqrt(3)/6, 0, 2/3]])
    O[0:4,0:4] = B1; O[4:8,4:8] = B2; O[8,8] = 5/3
    return O

for mu in [0.3, 1.0, 2.0]:
    O = expand_lambda(projector(mu,2)[0])
    print("mu", mu, "lambda expansion vs SM blocks:", np.max(np.abs(O - sm_blocks(mu))))

# 4. ED
def embed(op, n, pos, k, d=3):
    # op acts on sites pos..pos+k-1 (0-based), OBC layout
    return np.kron(np.kron(np.eye(d**pos), op), np.eye(d**(n-pos-k)))

def chain(Pi, n, k, pbc, d=3):
    dim = d**n
    H = np.zeros((dim,dim), dtype=complex)
    nterms = n if pbc else n-k+1
    for i in range(n-k+1):
        H += embed(Pi, n, i, k, d)
    if pbc:
        # wraparound terms via cyclic permutation: term at position i>n-k acts on sites i..i+k-1 mod n
        # build permutation that shifts site 0 -> end, apply embedded op at n-k
        for i in range(n-k+1, n):
            P = shift_perm(n, d)  # shifts sites by one
            # rotate so that sites i..i+k-1 land on 0..k-1: conjugate embed(op at 0) by shift^i
            S = np.linalg.matrix_power(P, i)
            H += S @ embed(Pi, n, 0, k, d) @ S.conj().T
    return H

def shift_perm(n, d=3):
    # maps basis |i0 i1 ... i_{n-1}> -> |i1 ... i_{n-1} i0> (translate left by one)
    dim = d**n
    P = np.zeros((dim,dim))
    for s in range(dim):
        digits = []
        x = s
        for _ in range(n):
            digits.append(x % d); x //= d
        digits = digits[::-1]           # most significant = site 0
        nd = digits[1:] + digits[:1]    # translated
        t = 0
        for dig in nd:
            t = t*d + dig
        P[t, s] = 1
    return P

def spectrum_report(H, tol=1e-7):
    ev = np.linalg.eigvals(H)
    idx = np.lexsort((ev.imag, ev.real))
    ev = ev[idx]
    e0 = ev[0]
    deg = np.sum(np.abs(ev - e0) < tol)
    outside = ev[np.abs(ev - e0) >= tol]
    gap = (outside[0].real - e0.real) if len(outside) else np.nan
    return ev, e0, deg, gap

print("\n--- ED OBC k=2 ---")
for mu in [0.2, 0.5, 1.0, 2.0, 5.0]:
    Pi = projector(mu,2)[0]
    for n in [4,5]:
        H = chain(Pi, n, 2, False)
        ev, e0, deg, gap = spectrum_report(H)
        print(f"mu={mu} n={n} OBC: E0={e0:.3e} deg={deg} gap={gap:.6f}")

print("\n--- ED PBC N=3 k=2 ---")
for mu in [0.1, 0.2, 0.25, 0.3, 0.5, 1.0, 2.0, 4.0, 5.0]:
    Pi = projector(mu,2)[0]
    H = chain(Pi, 3, 2, True)
    ev, e0, deg, gap = spectrum_report(H)
    print(f"mu={mu}: E0={e0:.6f} deg={deg} gap={gap:.6f} conj-closed={np.max(np.abs(np.sort_complex(ev)-np.sort_complex(ev.conj()))):.2e}")

print("\n--- ED PBC N=4 k=3 ---")
for mu in [0.1, 0.4, 1.0]:
    Pi3 = projector(mu,3)[0]
    H = chain(Pi3, 4, 3, True)
    ev, e0, deg, gap = spectrum_report(H)
    print(f"mu={mu}: E0={e0:.6f} deg={deg} gap={gap:.6f}")
