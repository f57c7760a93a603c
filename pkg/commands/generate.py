import logging

from commands.common import EXIT_OK, EXIT_USAGE
from exceptions import ClosedGraphsError, CommandError
from services.closure import closure_augment, closure_number
from services.graph_core import (
    add_universal_vertices,
    gen_complete,
    gen_complete_bipartite,
    gen_complete_multipartite,
    gen_cycle,
    gen_empty,
    gen_example1,
    gen_k5_union,
    gen_k5_union_minus_matching,
    gen_moon_moser,
    gen_path,
    gen_random,
    gen_star,
    write_edge_list,
)

logger = logging.getLogger(__name__)

FAMILIES = (
    "moon-moser",
    "k5-union",
    "k5-minus-matching",
    "example1",
    "random",
    "augmented",
    "complete-bipartite",
    "multipartite",
    "complete",
    "empty",
    "path",
    "cycle",
    "star",
)


def register(subparsers) -> None:
    parser = subparsers.add_parser("generate", help="Write a generated graph as an edge list")
    parser.add_argument("--family", required=True, choices=FAMILIES)
    parser.add_argument("--n", type=int, default=6, help="Vertex count (independent-set size for example1)")
    parser.add_argument("--p", type=float, default=0.5, help="Edge probability for random families")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--c", type=int, default=3, help="Closure target for the augmented family")
    parser.add_argument("--ell", type=int, default=2, help="ell for example1")
    parser.add_argument("--a", type=int, default=3, help="First side of complete-bipartite")
    parser.add_argument("--b", type=int, default=3, help="Second side of complete-bipartite")
    parser.add_argument("--parts", type=int, nargs="+", default=[2, 2, 2], help="Part sizes for multipartite")
    parser.add_argument("--universal", type=int, default=0, help="Append this many universal vertices")
    parser.set_defaults(handler=cmd_generate)


def build(args):
    family = args.family
    if family == "moon-moser":
        return gen_moon_moser(args.n)
    if family == "k5-union":
        return gen_k5_union(args.n)
    if family == "k5-minus-matching":
        return gen_k5_union_minus_matching(args.n)
    if family == "example1":
        return gen_example1(args.ell, args.n)[0]
    if family == "random":
        return gen_random(args.n, args.p, args.seed)
    if family == "augmented":
        return closure_augment(gen_random(args.n, args.p, args.seed), args.c)
    if family == "complete-bipartite":
        return gen_complete_bipartite(args.a, args.b)
    if family == "multipartite":
        return gen_complete_multipartite(args.parts)
    if family == "complete":
        return gen_complete(args.n)
    if family == "empty":
        return gen_empty(args.n)
    if family == "path":
        return gen_path(args.n)
    if family == "cycle":
        return gen_cycle(args.n)
    return gen_star(args.n)


def cmd_generate(args):
    """
    Generate a graph family member and print it in the edge-list format
    """
    try:
        if args.universal < 0:
            raise ValueError("--universal must be non-negative")
        g = build(args)
        if args.universal:
            g = add_universal_vertices(g, args.universal)
        c = closure_number(g).c
        logger.info(f"Generated {args.family}: n={g.n}, m={g.edge_count}, c={c}")
        header = f"# {args.family} seed={args.seed} c={c}\n"
        return header + write_edge_list(g), EXIT_OK

    except (ClosedGraphsError, ValueError) as e:
        logger.error(f"Generation error: {str(e)}")
        raise CommandError(EXIT_USAGE, f"Cannot generate {args.family}: {str(e)}")
    except Exception as e:
        logger.error(f"Generation failed: {str(e)}")
        raise CommandError(EXIT_USAGE, f"Generation failed: {str(e)}")
