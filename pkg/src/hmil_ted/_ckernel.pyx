# distutils: language = c++
# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled distance kernel.

Same recursion as ``_kernel_py`` evaluated in doubles. The engine routes a
forest here only when every cost involved is an integer small enough to be
exact in double precision, so results match the exact path bit for bit.
"""

from libcpp.vector cimport vector
from libcpp.unordered_map cimport unordered_map
from libcpp.pair cimport pair
from libc.math cimport fabs, INFINITY
from cython.operator cimport dereference as deref

cdef enum:
    OBJECT = 0
    BAG = 1
    VALUE = 2

cdef long long MEMO_LIMIT = 8000000


cdef class CKernel:
    cdef const signed char[::1] kind
    cdef const signed char[::1] dtype
    cdef const int[::1] value_id
    cdef const int[::1] child_start
    cdef const int[::1] child_count
    cdef const int[::1] child_ids
    cdef const int[::1] child_keys
    cdef const double[::1] node_cost
    cdef const double[::1] remove_cost
    cdef const double[::1] numbers
    cdef const long long[::1] str_start
    cdef const int[::1] str_len
    cdef const int[::1] codepoints
    cdef int relabel_code[4]
    cdef double relabel_cap[4]

    cdef unordered_map[long long, double] memo
    # scratch buffers; a kernel is never shared between threads
    cdef vector[int] lev_prev, lev_cur
    cdef vector[int] rest_a, rest_b
    cdef vector[double] delta, hu, hv, minv
    cdef vector[int] hp, hway
    cdef vector[char] used
    cdef vector[pair[int, int]] stack

    def __init__(self, dict arrays):
        self.kind = arrays["kind"]
        self.dtype = arrays["dtype"]
        self.value_id = arrays["value_id"]
        self.child_start = arrays["child_start"]
        self.child_count = arrays["child_count"]
        self.child_ids = arrays["child_ids"]
        self.child_keys = arrays["child_keys"]
        self.node_cost = arrays["node_cost"]
        self.remove_cost = arrays["remove_cost"]
        self.numbers = arrays["numbers"]
        self.str_start = arrays["str_start"]
        self.str_len = arrays["str_len"]
        self.codepoints = arrays["codepoints"]
        cdef int i
        for i in range(4):
            self.relabel_code[i] = arrays["relabel_code"][i]
            self.relabel_cap[i] = arrays["relabel_cap"][i]

    @property
    def memo_size(self):
        return self.memo.size()

    # -- leaves --------------------------------------------------------------

    cdef int levenshtein(self, int va, int vb, int limit) noexcept nogil:
        cdef long long sa = self.str_start[va], sb = self.str_start[vb]
        cdef int la = self.str_len[va], lb = self.str_len[vb]
        cdef long long tmp_s
        cdef int tmp_l, i, j, best, ca, x, y, z
        if la < lb:
            tmp_s = sa; sa = sb; sb = tmp_s
            tmp_l = la; la = lb; lb = tmp_l
        if la - lb >= limit:
            return limit
        if lb == 0:
            return la
        self.lev_prev.resize(lb + 1)
        self.lev_cur.resize(lb + 1)
        for j in range(lb + 1):
            self.lev_prev[j] = j
        for i in range(1, la + 1):
            ca = self.codepoints[sa + i - 1]
            self.lev_cur[0] = i
            best = i
            for j in range(1, lb + 1):
                x = self.lev_prev[j] + 1
                y = self.lev_cur[j - 1] + 1
                z = self.lev_prev[j - 1] + (ca != self.codepoints[sb + j - 1])
                if y < x:
                    x = y
                if z < x:
                    x = z
                self.lev_cur[j] = x
                if x < best:
                    best = x
            if best >= limit:
                return limit
            self.lev_prev.swap(self.lev_cur)
        x = self.lev_prev[lb]
        return x if x < limit else limit

    cdef double value_dist(self, int a, int b) noexcept nogil:
        cdef double both = self.node_cost[a] + self.node_cost[b]
        cdef int dt = self.dtype[a]
        cdef int va, vb, code
        cdef double cost
        if dt != self.dtype[b]:
            return both
        va = self.value_id[a]
        vb = self.value_id[b]
        if va == vb:
            return 0.0
        code = self.relabel_code[dt]
        if code == 0:
            cost = 1.0
        elif code == 1:
            cost = fabs(self.numbers[va] - self.numbers[vb])
        else:
            cost = self.levenshtein(va, vb, <int>self.relabel_cap[dt])
        return cost if cost <= both else both

    cdef inline long long key(self, int a, int b) noexcept nogil:
        if a < b:
            return (<long long>a << 32) | b
        return (<long long>b << 32) | a

    # returns -1.0 when child results are still needed
    cdef double quick(self, int a, int b) noexcept nogil:
        cdef int ka
        cdef unordered_map[long long, double].iterator it
        cdef double d
        if a == b:
            return 0.0
        ka = self.kind[a]
        if ka != self.kind[b]:
            return self.remove_cost[a] + self.remove_cost[b]
        if ka == VALUE:
            if self.relabel_code[self.dtype[a]] == 2 and self.dtype[a] == self.dtype[b]:
                it = self.memo.find(self.key(a, b))
                if it != self.memo.end():
                    return deref(it).second
                d = self.value_dist(a, b)
                self.memo[self.key(a, b)] = d
                return d
            return self.value_dist(a, b)
        it = self.memo.find(self.key(a, b))
        if it != self.memo.end():
            return deref(it).second
        return -1.0

    # -- inner nodes ---------------------------------------------------------

    cdef void bag_parts(self, int a, int b) noexcept nogil:
        cdef int i = 0, j = 0
        cdef int sa = self.child_start[a], na = self.child_count[a]
        cdef int sb = self.child_start[b], nb = self.child_count[b]
        cdef int x, y
        self.rest_a.clear()
        self.rest_b.clear()
        while i < na and j < nb:
            x = self.child_ids[sa + i]
            y = self.child_ids[sb + j]
            if x == y:
                i += 1
                j += 1
            elif x < y:
                self.rest_a.push_back(x)
                i += 1
            else:
                self.rest_b.push_back(y)
                j += 1
        while i < na:
            self.rest_a.push_back(self.child_ids[sa + i])
            i += 1
        while j < nb:
            self.rest_b.push_back(self.child_ids[sb + j])
            j += 1

    cdef bint push_pending(self, int a, int b) noexcept nogil:
        """Push child pairs lacking results; True if any were pushed."""
        cdef bint pushed = False
        cdef int i = 0, j = 0, x, y
        cdef int sa = self.child_start[a], na = self.child_count[a]
        cdef int sb = self.child_start[b], nb = self.child_count[b]
        cdef size_t p, q
        if self.kind[a] == OBJECT:
            while i < na and j < nb:
                x = self.child_keys[sa + i]
                y = self.child_keys[sb + j]
                if x == y:
                    if self.quick(self.child_ids[sa + i], self.child_ids[sb + j]) < 0:
                        self.stack.push_back(pair[int, int](self.child_ids[sa + i], self.child_ids[sb + j]))
                        pushed = True
                    i += 1
                    j += 1
                elif x < y:
                    i += 1
                else:
                    j += 1
            return pushed
        self.bag_parts(a, b)
        for p in range(self.rest_a.size()):
            for q in range(self.rest_b.size()):
                if self.quick(self.rest_a[p], self.rest_b[q]) < 0:
                    self.stack.push_back(pair[int, int](self.rest_a[p], self.rest_b[q]))
                    pushed = True
        return pushed

    cdef double combine(self, int a, int b) noexcept nogil:
        cdef int i = 0, j = 0, x, y
        cdef int sa = self.child_start[a], na = self.child_count[a]
        cdef int sb = self.child_start[b], nb = self.child_count[b]
        cdef double total = 0.0
        cdef size_t m, n, k, p, q
        if self.kind[a] == OBJECT:
            while i < na and j < nb:
                x = self.child_keys[sa + i]
                y = self.child_keys[sb + j]
                if x == y:
                    total += self.quick(self.child_ids[sa + i], self.child_ids[sb + j])
                    i += 1
                    j += 1
                elif x < y:
                    total += self.remove_cost[self.child_ids[sa + i]]
                    i += 1
                else:
                    total += self.remove_cost[self.child_ids[sb + j]]
                    j += 1
            while i < na:
                total += self.remove_cost[self.child_ids[sa + i]]
                i += 1
            while j < nb:
                total += self.remove_cost[self.child_ids[sb + j]]
                j += 1
            return total
        self.bag_parts(a, b)
        m = self.rest_a.size()
        n = self.rest_b.size()
        if m == 0:
            for q in range(n):
                total += self.remove_cost[self.rest_b[q]]
            return total
        if n == 0:
            for p in range(m):
                total += self.remove_cost[self.rest_a[p]]
            return total
        k = m if m > n else n
        self.delta.resize(k * k)
        for p in range(k):
            for q in range(k):
                if p < m and q < n:
                    self.delta[p * k + q] = self.quick(self.rest_a[p], self.rest_b[q])
                elif p < m:
                    self.delta[p * k + q] = self.remove_cost[self.rest_a[p]]
                else:
                    self.delta[p * k + q] = self.remove_cost[self.rest_b[q]]
        return self.hungarian(<int>k)

    cdef double hungarian(self, int k) noexcept nogil:
        """Optimal assignment total for the k x k matrix in ``self.delta``."""
        cdef int i, j, j0, j1, i0
        cdef double cur, dlt, total
        self.hu.assign(k + 1, 0.0)
        self.hv.assign(k + 1, 0.0)
        self.hp.assign(k + 1, 0)
        self.hway.assign(k + 1, 0)
        for i in range(1, k + 1):
            self.hp[0] = i
            j0 = 0
            self.minv.assign(k + 1, INFINITY)
            self.used.assign(k + 1, 0)
            while True:
                self.used[j0] = 1
                i0 = self.hp[j0]
                dlt = INFINITY
                j1 = 0
                for j in range(1, k + 1):
                    if not self.used[j]:
                        cur = self.delta[(i0 - 1) * k + (j - 1)] - self.hu[i0] - self.hv[j]
                        if cur < self.minv[j]:
                            self.minv[j] = cur
                            self.hway[j] = j0
                        if self.minv[j] < dlt:
                            dlt = self.minv[j]
                            j1 = j
                for j in range(k + 1):
                    if self.used[j]:
                        self.hu[self.hp[j]] += dlt
                        self.hv[j] -= dlt
                    else:
                        self.minv[j] -= dlt
                j0 = j1
                if self.hp[j0] == 0:
                    break
            while j0:
                j1 = self.hway[j0]
                self.hp[j0] = self.hp[j1]
                j0 = j1
        total = 0.0
        for j in range(1, k + 1):
            total += self.delta[(self.hp[j] - 1) * k + (j - 1)]
        return total

    # -- driver --------------------------------------------------------------

    cdef double distance_c(self, int a, int b) noexcept nogil:
        cdef double found = self.quick(a, b)
        cdef int x, y
        cdef long long kk
        if found >= 0:
            return found
        if <long long>self.memo.size() > MEMO_LIMIT:
            self.memo.clear()
        self.stack.clear()
        self.stack.push_back(pair[int, int](a, b))
        while not self.stack.empty():
            x = self.stack.back().first
            y = self.stack.back().second
            kk = self.key(x, y)
            if self.memo.find(kk) != self.memo.end():
                self.stack.pop_back()
                continue
            if self.push_pending(x, y):
                continue
            self.memo[kk] = self.combine(x, y)
            self.stack.pop_back()
        return self.memo[self.key(a, b)]

    def distance(self, int a, int b):
        return self.distance_c(a, b)

    def fill_rows(self, const int[::1] ids, const int[::1] rows, double[:, ::1] out):
        """Write upper-triangle distances for ``rows`` into ``out`` (GIL released)."""
        cdef Py_ssize_t r, j, i, n = ids.shape[0]
        with nogil:
            for r in range(rows.shape[0]):
                i = rows[r]
                for j in range(i + 1, n):
                    out[i, j] = self.distance_c(ids[i], ids[j])

