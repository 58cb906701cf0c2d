/* Maximum-weight matching on general graphs (Galil's O(n^3) blossom
 * algorithm, primal-dual formulation with integer weights).
 *
 * Same algorithm and data-structure layout as the classic van Rantwijk
 * implementation; vertices are 0..nv-1, blossom slots nv..2nv-1.
 * Exposed as planarmem._blossom.solve(nv, ei, ej, wt) -> int32 mate array,
 * mate[v] = matched partner or -1.
 */

#define PY_SSIZE_T_CLEAN
#include <Python.h>
#include <stdlib.h>
#include <string.h>

typedef long long i64;

#define NONODE (-1)
#define LBL_FREE 0
#define LBL_S 1
#define LBL_T 2

typedef struct {
    int v, w, e; /* oriented edge: vertices v->w, edge id e (-1 = none) */
} Pair;

static const Pair NOPAIR = {-1, -1, -1};

typedef struct {
    int nv, nb;        /* vertex count, total slots 2*nv */
    int ne;
    int *e0, *e1;      /* edge endpoints */
    i64 *wt;
    int *adj_start;    /* CSR adjacency: edge ids incident to v */
    int *adj_eid;

    int *mate;         /* vertex -> partner vertex or -1 */
    int *mate_e;       /* vertex -> matched edge id or -1 */
    int *label;        /* 0 free, 1 S, 2 T, +4 breadcrumb */
    Pair *labeledge;
    int *inblossom;    /* vertex -> top-level blossom */
    int *blossomparent;
    int *blossombase;
    Pair *bestedge;
    i64 *dual;         /* vertex and blossom dual variables */

    /* per nontrivial blossom (slots nv..2nv-1) */
    int *nchilds;
    int **childs;
    Pair **bedges;     /* edges[i] connects childs[i-1] -- childs[i] (cyclic) */
    int *nmybest;
    Pair **mybest;

    int *unused;       /* stack of free blossom ids */
    int nunused;

    int *allow_stamp;  /* per-edge: equals stage marker if allowed */
    int stage_mark;

    int *queue;
    int nqueue, qcap;

    /* scratch */
    int *leafbuf;
    Pair *bestedgeto;  /* keyed by blossom id */
    int *touched;

    int err;           /* set on internal inconsistency */
} MW;

#define CHK(g, cond) do { if (!(cond)) { (g)->err = __LINE__; return; } } while (0)
#define CHKR(g, cond, ret) do { if (!(cond)) { (g)->err = __LINE__; return (ret); } } while (0)

static i64 slack(MW *g, int e)
{
    return g->dual[g->e0[e]] + g->dual[g->e1[e]] - 2 * g->wt[e];
}

static int allowed(MW *g, int e)
{
    return g->allow_stamp[e] == g->stage_mark;
}

/* Collect the leaf vertices of blossom b into buf; returns count. */
static int leaves(MW *g, int b, int *buf)
{
    int cnt = 0, i;
    if (b < g->nv) {
        buf[0] = b;
        return 1;
    }
    for (i = 0; i < g->nchilds[b]; i++)
        cnt += leaves(g, g->childs[b][i], buf + cnt);
    return cnt;
}

static void qpush(MW *g, int v)
{
    if (g->nqueue == g->qcap) {
        int ncap = g->qcap * 2 + 16;
        int *nq = (int *)realloc(g->queue, sizeof(int) * (size_t)ncap);
        CHK(g, nq);
        g->queue = nq;
        g->qcap = ncap;
    }
    g->queue[g->nqueue++] = v;
}

static void assign_label(MW *g, int w, int t, Pair edge)
{
    int b = g->inblossom[w];
    CHK(g, g->label[w] == LBL_FREE && g->label[b] == LBL_FREE);
    g->label[w] = g->label[b] = t;
    g->labeledge[w] = g->labeledge[b] = edge;
    g->bestedge[w] = g->bestedge[b] = NOPAIR;
    if (t == LBL_S) {
        int nl = leaves(g, b, g->leafbuf), i;
        for (i = 0; i < nl; i++) {
            qpush(g, g->leafbuf[i]);
            if (g->err)
                return;
        }
    } else if (t == LBL_T) {
        int base = g->blossombase[b];
        Pair me;
        CHK(g, g->mate[base] >= 0);
        me.v = base;
        me.w = g->mate[base];
        me.e = g->mate_e[base];
        assign_label(g, me.w, LBL_S, me);
    }
}

/* Trace back from v and w to find a common ancestor in the alternating
 * tree; returns its base vertex, or NONODE if v and w are in different
 * trees (an augmenting path exists). */
static int scan_blossom(MW *g, int v, int w)
{
    int *stk = g->leafbuf; /* reuse scratch for visited blossoms */
    int nstk = 0, base = NONODE, i, b;
    while (v != NONODE) {
        b = g->inblossom[v];
        if (g->label[b] & 4) {
            base = g->blossombase[b];
            break;
        }
        CHKR(g, g->label[b] == LBL_S, NONODE);
        stk[nstk++] = b;
        g->label[b] = LBL_S | 4;
        if (g->labeledge[b].e == -1 && g->labeledge[b].v == -1) {
            CHKR(g, g->mate[g->blossombase[b]] == -1, NONODE);
            v = NONODE;
        } else {
            CHKR(g, g->labeledge[b].v == g->mate[g->blossombase[b]], NONODE);
            v = g->labeledge[b].v;
            b = g->inblossom[v];
            CHKR(g, g->label[b] == LBL_T, NONODE);
            v = g->labeledge[b].v;
        }
        if (w != NONODE) {
            int tmp = v; v = w; w = tmp;
        }
    }
    for (i = 0; i < nstk; i++)
        g->label[stk[i]] = LBL_S;
    return base;
}

/* Construct a new blossom with the given base through S-vertices v and w
 * joined by the tight edge (v, w, e). */
static void add_blossom(MW *g, int base, Pair k0)
{
    int v = k0.v, w = k0.w;
    int bb = g->inblossom[base];
    int bv = g->inblossom[v];
    int bw = g->inblossom[w];
    int b, i, j, npath, ntouch = 0;
    int *path;
    Pair *edgs;

    CHK(g, g->nunused > 0);
    b = g->unused[--g->nunused];
    g->blossombase[b] = base;
    g->blossomparent[b] = -1;
    g->blossomparent[bb] = b;

    /* generous upper bound on cycle length: every top-level blossom */
    path = (int *)malloc(sizeof(int) * (size_t)(g->nv + 1));
    edgs = (Pair *)malloc(sizeof(Pair) * (size_t)(g->nv + 1));
    CHK(g, path && edgs);
    npath = 0;
    edgs[npath] = k0;

    /* trace back from v to base */
    while (bv != bb) {
        g->blossomparent[bv] = b;
        path[npath] = bv;
        npath++;
        edgs[npath] = g->labeledge[bv];
        CHK(g, g->label[bv] == LBL_T ||
               (g->label[bv] == LBL_S &&
                g->labeledge[bv].v == g->mate[g->blossombase[bv]]));
        v = g->labeledge[bv].v;
        bv = g->inblossom[v];
    }
    path[npath++] = bb;
    /* reverse path[0..npath) and edgs[0..npath) */
    for (i = 0, j = npath - 1; i < j; i++, j--) {
        int t = path[i]; path[i] = path[j]; path[j] = t;
    }
    for (i = 0, j = npath - 1; i < j; i++, j--) {
        Pair t = edgs[i]; edgs[i] = edgs[j]; edgs[j] = t;
    }
    /* trace back from w to base, edges reversed */
    while (bw != bb) {
        Pair rev;
        g->blossomparent[bw] = b;
        path[npath] = bw;
        rev = g->labeledge[bw];
        edgs[npath] = rev;
        edgs[npath].v = rev.w;
        edgs[npath].w = rev.v;
        npath++;
        CHK(g, g->label[bw] == LBL_T ||
               (g->label[bw] == LBL_S &&
                g->labeledge[bw].v == g->mate[g->blossombase[bw]]));
        w = g->labeledge[bw].v;
        bw = g->inblossom[w];
    }

    g->nchilds[b] = npath;
    g->childs[b] = path;
    g->bedges[b] = edgs;

    CHK(g, g->label[bb] == LBL_S);
    g->label[b] = LBL_S;
    g->labeledge[b] = g->labeledge[bb];
    g->dual[b] = 0;

    /* relabel contained vertices */
    {
        int nl = leaves(g, b, g->leafbuf);
        for (i = 0; i < nl; i++) {
            int u = g->leafbuf[i];
            if (g->label[g->inblossom[u]] == LBL_T) {
                qpush(g, u);
                if (g->err)
                    return;
            }
            g->inblossom[u] = b;
        }
    }

    /* compute least-slack edges to neighbouring S-blossoms */
    for (i = 0; i < npath; i++) {
        int sub = path[i];
        if (sub >= g->nv && g->mybest[sub] != NULL) {
            int m;
            for (m = 0; m < g->nmybest[sub]; m++) {
                Pair k = g->mybest[sub][m];
                int a = k.v, c = k.w, bj;
                if (g->inblossom[c] == b) {
                    int t = a; a = c; c = t;
                }
                bj = g->inblossom[c];
                if (bj != b && g->label[bj] == LBL_S &&
                    (g->bestedgeto[bj].e == -1 ||
                     slack(g, k.e) < slack(g, g->bestedgeto[bj].e))) {
                    if (g->bestedgeto[bj].e == -1)
                        g->touched[ntouch++] = bj;
                    g->bestedgeto[bj] = k;
                }
            }
            free(g->mybest[sub]);
            g->mybest[sub] = NULL;
            g->nmybest[sub] = 0;
        } else {
            int nl = (sub < g->nv) ? 1 : leaves(g, sub, g->leafbuf);
            int li;
            if (sub < g->nv)
                g->leafbuf[0] = sub;
            for (li = 0; li < nl; li++) {
                int u = g->leafbuf[li], ai;
                for (ai = g->adj_start[u]; ai < g->adj_start[u + 1]; ai++) {
                    int e = g->adj_eid[ai];
                    int c = (g->e0[e] == u) ? g->e1[e] : g->e0[e];
                    int bj = g->inblossom[c];
                    if (bj != b && g->label[bj] == LBL_S &&
                        (g->bestedgeto[bj].e == -1 ||
                         slack(g, e) < slack(g, g->bestedgeto[bj].e))) {
                        if (g->bestedgeto[bj].e == -1)
                            g->touched[ntouch++] = bj;
                        g->bestedgeto[bj].v = u;
                        g->bestedgeto[bj].w = c;
                        g->bestedgeto[bj].e = e;
                    }
                }
            }
        }
        g->bestedge[sub] = NOPAIR;
    }

    g->mybest[b] = (Pair *)malloc(sizeof(Pair) * (size_t)(ntouch > 0 ? ntouch : 1));
    CHK(g, g->mybest[b]);
    g->nmybest[b] = ntouch;
    g->bestedge[b] = NOPAIR;
    {
        i64 bestsl = 0;
        int have = 0;
        for (i = 0; i < ntouch; i++) {
            int bj = g->touched[i];
            Pair k = g->bestedgeto[bj];
            g->mybest[b][i] = k;
            g->bestedgeto[bj] = NOPAIR;
            if (!have || slack(g, k.e) < bestsl) {
                bestsl = slack(g, k.e);
                g->bestedge[b] = k;
                have = 1;
            }
        }
    }
}

static int wrapidx(int j, int len)
{
    j %= len;
    if (j < 0)
        j += len;
    return j;
}

/* Expand (undo) blossom b; if endstage, recursively expand zero-dual
 * sub-blossoms, otherwise relabel the cycle of a T-blossom. */
static void expand_blossom(MW *g, int b, int endstage)
{
    int i, nc = g->nchilds[b];
    int *ch = g->childs[b];
    Pair *ed = g->bedges[b];

    for (i = 0; i < nc; i++) {
        int s = ch[i];
        g->blossomparent[s] = -1;
        if (s < g->nv) {
            g->inblossom[s] = s;
        } else if (endstage && g->dual[s] == 0) {
            expand_blossom(g, s, endstage);
            if (g->err)
                return;
        } else {
            int nl = leaves(g, s, g->leafbuf), li;
            for (li = 0; li < nl; li++)
                g->inblossom[g->leafbuf[li]] = s;
        }
    }

    if (!endstage && g->label[b] == LBL_T) {
        int entrychild = g->inblossom[g->labeledge[b].w];
        int j = -1, jstep, v, w, bw;
        Pair cur;
        for (i = 0; i < nc; i++)
            if (ch[i] == entrychild) {
                j = i;
                break;
            }
        CHK(g, j >= 0);
        if (j & 1) {
            j -= nc;
            jstep = 1;
        } else {
            jstep = -1;
        }
        cur = g->labeledge[b];
        v = cur.v;
        w = cur.w;
        while (j != 0) {
            Pair pq, fwd;
            int p, q;
            if (jstep == 1)
                pq = ed[wrapidx(j, nc)];
            else {
                pq = ed[wrapidx(j - 1, nc)];
                { int t = pq.v; pq.v = pq.w; pq.w = t; }
            }
            p = pq.v;
            q = pq.w;
            g->label[w] = LBL_FREE;
            g->label[q] = LBL_FREE;
            {
                Pair le;
                le.v = v; le.w = w; le.e = cur.e;
                assign_label(g, w, LBL_T, le);
                if (g->err)
                    return;
            }
            g->allow_stamp[pq.e] = g->stage_mark;
            j += jstep;
            if (jstep == 1)
                fwd = ed[wrapidx(j, nc)];
            else {
                fwd = ed[wrapidx(j - 1, nc)];
                { int t = fwd.v; fwd.v = fwd.w; fwd.w = t; }
            }
            v = fwd.v;
            w = fwd.w;
            g->allow_stamp[fwd.e] = g->stage_mark;
            cur = fwd;
            j += jstep;
        }
        /* relabel the base T-sub-blossom */
        bw = ch[wrapidx(j, nc)];
        g->label[w] = LBL_T;
        g->label[bw] = LBL_T;
        {
            Pair le;
            le.v = v; le.w = w; le.e = cur.e;
            g->labeledge[w] = le;
            g->labeledge[bw] = le;
        }
        g->bestedge[bw] = NOPAIR;
        j += jstep;
        while (ch[wrapidx(j, nc)] != entrychild) {
            int bv = ch[wrapidx(j, nc)], lv;
            if (g->label[bv] == LBL_S) {
                j += jstep;
                continue;
            }
            lv = -1;
            if (bv >= g->nv) {
                int nl = leaves(g, bv, g->leafbuf), li;
                for (li = 0; li < nl; li++)
                    if (g->label[g->leafbuf[li]] != LBL_FREE) {
                        lv = g->leafbuf[li];
                        break;
                    }
            } else if (g->label[bv] != LBL_FREE) {
                lv = bv;
            }
            if (lv >= 0) {
                CHK(g, g->label[lv] == LBL_T);
                CHK(g, g->inblossom[lv] == bv);
                g->label[lv] = LBL_FREE;
                g->label[g->mate[g->blossombase[bv]]] = LBL_FREE;
                assign_label(g, lv, LBL_T, g->labeledge[lv]);
                if (g->err)
                    return;
            }
            j += jstep;
        }
    }

    g->label[b] = LBL_FREE;
    g->labeledge[b] = NOPAIR;
    g->bestedge[b] = NOPAIR;
    g->blossomparent[b] = -1;
    g->blossombase[b] = -1;
    g->dual[b] = 0;
    free(g->childs[b]);
    free(g->bedges[b]);
    free(g->mybest[b]);
    g->childs[b] = NULL;
    g->bedges[b] = NULL;
    g->mybest[b] = NULL;
    g->nchilds[b] = 0;
    g->nmybest[b] = 0;
    g->unused[g->nunused++] = b;
}

/* Swap matched/unmatched edges around the cycle of blossom b so that its
 * base ends up at vertex v. */
static void augment_blossom(MW *g, int b, int v)
{
    int t = v, i, j, jstep, nc = g->nchilds[b];
    int *ch = g->childs[b];
    Pair *ed = g->bedges[b];

    while (g->blossomparent[t] != b)
        t = g->blossomparent[t];
    if (t >= g->nv) {
        augment_blossom(g, t, v);
        if (g->err)
            return;
    }
    i = -1;
    for (j = 0; j < nc; j++)
        if (ch[j] == t) {
            i = j;
            break;
        }
    CHK(g, i >= 0);
    j = i;
    if (i & 1) {
        j -= nc;
        jstep = 1;
    } else {
        jstep = -1;
    }
    while (j != 0) {
        Pair wx;
        int w, x;
        j += jstep;
        t = ch[wrapidx(j, nc)];
        if (jstep == 1)
            wx = ed[wrapidx(j, nc)];
        else {
            wx = ed[wrapidx(j - 1, nc)];
            { int tt = wx.v; wx.v = wx.w; wx.w = tt; }
        }
        w = wx.v;
        x = wx.w;
        if (t >= g->nv) {
            augment_blossom(g, t, w);
            if (g->err)
                return;
        }
        j += jstep;
        t = ch[wrapidx(j, nc)];
        if (t >= g->nv) {
            augment_blossom(g, t, x);
            if (g->err)
                return;
        }
        g->mate[w] = x;
        g->mate[x] = w;
        g->mate_e[w] = wx.e;
        g->mate_e[x] = wx.e;
    }
    /* rotate childs/edges so that child i comes first */
    if (i > 0) {
        int *nch = (int *)malloc(sizeof(int) * (size_t)nc);
        Pair *ned = (Pair *)malloc(sizeof(Pair) * (size_t)nc);
        CHK(g, nch && ned);
        for (j = 0; j < nc; j++) {
            nch[j] = ch[(i + j) % nc];
            ned[j] = ed[(i + j) % nc];
        }
        memcpy(ch, nch, sizeof(int) * (size_t)nc);
        memcpy(ed, ned, sizeof(Pair) * (size_t)nc);
        free(nch);
        free(ned);
    }
    g->blossombase[b] = g->blossombase[ch[0]];
    CHK(g, g->blossombase[b] == v);
}

/* Augment the matching along the path through tight edge k0. */
static void augment_matching(MW *g, Pair k0)
{
    int side;
    for (side = 0; side < 2; side++) {
        int s = side == 0 ? k0.v : k0.w;
        int jv = side == 0 ? k0.w : k0.v;
        int je = k0.e;
        for (;;) {
            int bs = g->inblossom[s], t, bt;
            Pair le;
            CHK(g, g->label[bs] == LBL_S);
            if (bs >= g->nv) {
                augment_blossom(g, bs, s);
                if (g->err)
                    return;
            }
            g->mate[s] = jv;
            g->mate_e[s] = je;
            if (g->labeledge[bs].v == -1 && g->labeledge[bs].e == -1)
                break; /* reached a root vertex */
            t = g->labeledge[bs].v;
            bt = g->inblossom[t];
            CHK(g, g->label[bt] == LBL_T);
            le = g->labeledge[bt];
            s = le.v;
            jv = le.w;
            je = le.e;
            CHK(g, g->blossombase[bt] == t);
            if (bt >= g->nv) {
                augment_blossom(g, bt, jv);
                if (g->err)
                    return;
            }
            g->mate[jv] = s;
            g->mate_e[jv] = je;
        }
    }
}

static void mw_run(MW *g)
{
    int nv = g->nv, nb = g->nb, v, b, e, stage;
    i64 maxweight = 0;

    for (e = 0; e < g->ne; e++)
        if (g->wt[e] > maxweight)
            maxweight = g->wt[e];
    for (v = 0; v < nv; v++) {
        g->mate[v] = -1;
        g->mate_e[v] = -1;
        g->inblossom[v] = v;
        g->dual[v] = maxweight;
    }
    for (b = 0; b < nb; b++) {
        g->blossomparent[b] = -1;
        g->blossombase[b] = (b < nv) ? b : -1;
        g->label[b] = LBL_FREE;
        g->labeledge[b] = NOPAIR;
        g->bestedge[b] = NOPAIR;
        g->bestedgeto[b] = NOPAIR;
        if (b >= nv) {
            g->dual[b] = 0;
            g->childs[b] = NULL;
            g->bedges[b] = NULL;
            g->mybest[b] = NULL;
            g->nchilds[b] = 0;
            g->nmybest[b] = 0;
        }
    }
    g->nunused = 0;
    for (b = nv; b < nb; b++)
        g->unused[g->nunused++] = b;

    for (stage = 0; stage < nv; stage++) {
        int augmented = 0;

        memset(g->label, 0, sizeof(int) * (size_t)nb);
        for (b = 0; b < nb; b++) {
            g->labeledge[b] = NOPAIR;
            g->bestedge[b] = NOPAIR;
            if (b >= nv && g->mybest[b] != NULL) {
                free(g->mybest[b]);
                g->mybest[b] = NULL;
                g->nmybest[b] = 0;
            }
        }
        g->stage_mark++;
        g->nqueue = 0;

        for (v = 0; v < nv; v++)
            if (g->mate[v] == -1 && g->label[g->inblossom[v]] == LBL_FREE) {
                assign_label(g, v, LBL_S, NOPAIR);
                if (g->err)
                    return;
            }

        for (;;) {
            while (g->nqueue > 0 && !augmented) {
                int ai;
                v = g->queue[--g->nqueue];
                CHK(g, g->label[g->inblossom[v]] == LBL_S);
                for (ai = g->adj_start[v]; ai < g->adj_start[v + 1]; ai++) {
                    int w, bv, bw;
                    i64 kslack = 0;
                    e = g->adj_eid[ai];
                    w = (g->e0[e] == v) ? g->e1[e] : g->e0[e];
                    bv = g->inblossom[v];
                    bw = g->inblossom[w];
                    if (bv == bw)
                        continue;
                    if (!allowed(g, e)) {
                        kslack = slack(g, e);
                        if (kslack <= 0)
                            g->allow_stamp[e] = g->stage_mark;
                    }
                    if (allowed(g, e)) {
                        Pair k;
                        k.v = v; k.w = w; k.e = e;
                        if (g->label[bw] == LBL_FREE) {
                            assign_label(g, w, LBL_T, k);
                            if (g->err)
                                return;
                        } else if (g->label[bw] == LBL_S) {
                            int base = scan_blossom(g, v, w);
                            if (g->err)
                                return;
                            if (base != NONODE) {
                                add_blossom(g, base, k);
                                if (g->err)
                                    return;
                            } else {
                                augment_matching(g, k);
                                if (g->err)
                                    return;
                                augmented = 1;
                                break;
                            }
                        } else if (g->label[w] == LBL_FREE) {
                            CHK(g, g->label[bw] == LBL_T);
                            g->label[w] = LBL_T;
                            g->labeledge[w] = k;
                        }
                    } else if (g->label[bw] == LBL_S) {
                        if (g->bestedge[bv].e == -1 ||
                            kslack < slack(g, g->bestedge[bv].e)) {
                            g->bestedge[bv].v = v;
                            g->bestedge[bv].w = w;
                            g->bestedge[bv].e = e;
                        }
                    } else if (g->label[w] == LBL_FREE) {
                        if (g->bestedge[w].e == -1 ||
                            kslack < slack(g, g->bestedge[w].e)) {
                            g->bestedge[w].v = v;
                            g->bestedge[w].w = w;
                            g->bestedge[w].e = e;
                        }
                    }
                }
            }
            if (augmented)
                break;

            /* compute the dual adjustment */
            {
                int deltatype = 1, deltablossom = -1;
                i64 delta = 0, d;
                Pair deltaedge = NOPAIR;

                delta = g->dual[0];
                for (v = 1; v < nv; v++)
                    if (g->dual[v] < delta)
                        delta = g->dual[v];

                for (v = 0; v < nv; v++) {
                    if (g->label[g->inblossom[v]] == LBL_FREE &&
                        g->bestedge[v].e != -1) {
                        d = slack(g, g->bestedge[v].e);
                        if (d < delta) {
                            delta = d;
                            deltatype = 2;
                            deltaedge = g->bestedge[v];
                        }
                    }
                }
                for (b = 0; b < nb; b++) {
                    if (g->blossomparent[b] == -1 && g->label[b] == LBL_S &&
                        g->bestedge[b].e != -1 &&
                        (b < nv || g->childs[b] != NULL)) {
                        i64 ks = slack(g, g->bestedge[b].e);
                        CHK(g, ks % 2 == 0);
                        d = ks / 2;
                        if (d < delta) {
                            delta = d;
                            deltatype = 3;
                            deltaedge = g->bestedge[b];
                        }
                    }
                }
                for (b = nv; b < nb; b++) {
                    if (g->childs[b] != NULL && g->blossomparent[b] == -1 &&
                        g->label[b] == LBL_T && g->dual[b] < delta) {
                        delta = g->dual[b];
                        deltatype = 4;
                        deltablossom = b;
                    }
                }

                for (v = 0; v < nv; v++) {
                    int lb = g->label[g->inblossom[v]];
                    if (lb == LBL_S)
                        g->dual[v] -= delta;
                    else if (lb == LBL_T)
                        g->dual[v] += delta;
                }
                for (b = nv; b < nb; b++) {
                    if (g->childs[b] != NULL && g->blossomparent[b] == -1) {
                        if (g->label[b] == LBL_S)
                            g->dual[b] += delta;
                        else if (g->label[b] == LBL_T)
                            g->dual[b] -= delta;
                    }
                }

                if (deltatype == 1) {
                    break; /* optimum reached */
                } else if (deltatype == 2 || deltatype == 3) {
                    g->allow_stamp[deltaedge.e] = g->stage_mark;
                    CHK(g, g->label[g->inblossom[deltaedge.v]] == LBL_S);
                    qpush(g, deltaedge.v);
                    if (g->err)
                        return;
                } else {
                    expand_blossom(g, deltablossom, 0);
                    if (g->err)
                        return;
                }
            }
        }

        for (v = 0; v < nv; v++)
            if (g->mate[v] != -1)
                CHK(g, g->mate[g->mate[v]] == v);
        if (!augmented)
            break;

        /* discard zero-dual S-blossoms at the end of the stage */
        for (b = nv; b < nb; b++) {
            if (g->childs[b] != NULL && g->blossomparent[b] == -1 &&
                g->label[b] == LBL_S && g->dual[b] == 0) {
                expand_blossom(g, b, 1);
                if (g->err)
                    return;
            }
        }
    }
}

static void mw_free(MW *g)
{
    int b;
    if (g->childs)
        for (b = g->nv; b < g->nb; b++) {
            free(g->childs[b]);
            free(g->bedges[b]);
            free(g->mybest[b]);
        }
    free(g->e0); free(g->e1); free(g->wt);
    free(g->adj_start); free(g->adj_eid);
    free(g->mate); free(g->mate_e);
    free(g->label); free(g->labeledge);
    free(g->inblossom); free(g->blossomparent); free(g->blossombase);
    free(g->bestedge); free(g->dual);
    free(g->nchilds); free(g->childs); free(g->bedges);
    free(g->nmybest); free(g->mybest);
    free(g->unused); free(g->allow_stamp);
    free(g->queue); free(g->leafbuf);
    free(g->bestedgeto); free(g->touched);
}

static PyObject *py_solve(PyObject *self, PyObject *args)
{
    int nv;
    Py_buffer bi, bj, bw;
    MW g;
    int ne, e, v, ok = 1;
    const i64 *ei, *ej, *wt;
    PyObject *res = NULL;

    (void)self;
    if (!PyArg_ParseTuple(args, "iy*y*y*", &nv, &bi, &bj, &bw))
        return NULL;
    if (bi.len != bj.len || bi.len != bw.len || bi.len % 8 != 0) {
        PyBuffer_Release(&bi); PyBuffer_Release(&bj); PyBuffer_Release(&bw);
        PyErr_SetString(PyExc_ValueError, "edge arrays must be equal-length int64 buffers");
        return NULL;
    }
    ne = (int)(bi.len / 8);
    ei = (const i64 *)bi.buf;
    ej = (const i64 *)bj.buf;
    wt = (const i64 *)bw.buf;

    memset(&g, 0, sizeof(g));
    g.nv = nv;
    g.nb = 2 * nv;
    g.ne = ne;
    g.stage_mark = 1;

    g.e0 = (int *)malloc(sizeof(int) * (size_t)(ne > 0 ? ne : 1));
    g.e1 = (int *)malloc(sizeof(int) * (size_t)(ne > 0 ? ne : 1));
    g.wt = (i64 *)malloc(sizeof(i64) * (size_t)(ne > 0 ? ne : 1));
    g.adj_start = (int *)calloc((size_t)nv + 2, sizeof(int));
    g.adj_eid = (int *)malloc(sizeof(int) * (size_t)(2 * (ne > 0 ? ne : 1)));
    g.mate = (int *)malloc(sizeof(int) * (size_t)(nv > 0 ? nv : 1));
    g.mate_e = (int *)malloc(sizeof(int) * (size_t)(nv > 0 ? nv : 1));
    g.label = (int *)malloc(sizeof(int) * (size_t)(g.nb > 0 ? g.nb : 1));
    g.labeledge = (Pair *)malloc(sizeof(Pair) * (size_t)(g.nb > 0 ? g.nb : 1));
    g.inblossom = (int *)malloc(sizeof(int) * (size_t)(nv > 0 ? nv : 1));
    g.blossomparent = (int *)malloc(sizeof(int) * (size_t)(g.nb > 0 ? g.nb : 1));
    g.blossombase = (int *)malloc(sizeof(int) * (size_t)(g.nb > 0 ? g.nb : 1));
    g.bestedge = (Pair *)malloc(sizeof(Pair) * (size_t)(g.nb > 0 ? g.nb : 1));
    g.dual = (i64 *)malloc(sizeof(i64) * (size_t)(g.nb > 0 ? g.nb : 1));
    g.nchilds = (int *)calloc((size_t)(g.nb > 0 ? g.nb : 1), sizeof(int));
    g.childs = (int **)calloc((size_t)(g.nb > 0 ? g.nb : 1), sizeof(int *));
    g.bedges = (Pair **)calloc((size_t)(g.nb > 0 ? g.nb : 1), sizeof(Pair *));
    g.nmybest = (int *)calloc((size_t)(g.nb > 0 ? g.nb : 1), sizeof(int));
    g.mybest = (Pair **)calloc((size_t)(g.nb > 0 ? g.nb : 1), sizeof(Pair *));
    g.unused = (int *)malloc(sizeof(int) * (size_t)(nv > 0 ? nv : 1));
    g.allow_stamp = (int *)calloc((size_t)(ne > 0 ? ne : 1), sizeof(int));
    g.qcap = 2 * nv + 16;
    g.queue = (int *)malloc(sizeof(int) * (size_t)g.qcap);
    g.leafbuf = (int *)malloc(sizeof(int) * (size_t)(nv > 0 ? nv : 1));
    g.bestedgeto = (Pair *)malloc(sizeof(Pair) * (size_t)(g.nb > 0 ? g.nb : 1));
    g.touched = (int *)malloc(sizeof(int) * (size_t)(g.nb > 0 ? g.nb : 1));

    ok = g.e0 && g.e1 && g.wt && g.adj_start && g.adj_eid && g.mate &&
         g.mate_e && g.label && g.labeledge && g.inblossom &&
         g.blossomparent && g.blossombase && g.bestedge && g.dual &&
         g.nchilds && g.childs && g.bedges && g.nmybest && g.mybest &&
         g.unused && g.allow_stamp && g.queue && g.leafbuf &&
         g.bestedgeto && g.touched;
    if (!ok) {
        PyErr_NoMemory();
        goto done;
    }

    for (e = 0; e < ne; e++) {
        int a = (int)ei[e], c = (int)ej[e];
        if (a < 0 || a >= nv || c < 0 || c >= nv || a == c) {
            PyErr_SetString(PyExc_ValueError, "invalid edge");
            goto done;
        }
        g.e0[e] = a;
        g.e1[e] = c;
        g.wt[e] = wt[e];
        g.adj_start[a + 1]++;
        g.adj_start[c + 1]++;
    }
    for (v = 0; v < nv; v++)
        g.adj_start[v + 1] += g.adj_start[v];
    {
        int *fill = (int *)malloc(sizeof(int) * (size_t)(nv > 0 ? nv : 1));
        if (!fill) {
            PyErr_NoMemory();
            goto done;
        }
        memcpy(fill, g.adj_start, sizeof(int) * (size_t)nv);
        for (e = 0; e < ne; e++) {
            g.adj_eid[fill[g.e0[e]]++] = e;
            g.adj_eid[fill[g.e1[e]]++] = e;
        }
        free(fill);
    }

    mw_run(&g);
    if (g.err) {
        PyErr_Format(PyExc_RuntimeError,
                     "internal inconsistency in matching solver (line %d)",
                     g.err);
        goto done;
    }

    res = PyBytes_FromStringAndSize(NULL, (Py_ssize_t)nv * 4);
    if (res) {
        int *out = (int *)PyBytes_AS_STRING(res);
        for (v = 0; v < nv; v++)
            out[v] = g.mate[v];
    }

done:
    mw_free(&g);
    PyBuffer_Release(&bi);
    PyBuffer_Release(&bj);
    PyBuffer_Release(&bw);
    return res;
}

static PyMethodDef methods[] = {
    {"solve", py_solve, METH_VARARGS,
     "solve(n, ei, ej, wt) -> bytes of int32 mate array (partner or -1).\n"
     "ei, ej, wt are contiguous int64 buffers of equal length."},
    {NULL, NULL, 0, NULL},
};

static struct PyModuleDef moduledef = {
    PyModuleDef_HEAD_INIT, "_blossom",
    "Maximum-weight general matching (blossom algorithm).",
    -1, methods, NULL, NULL, NULL, NULL,
};

PyMODINIT_FUNC PyInit__blossom(void)
{
    return PyModule_Create(&moduledef);
}
