from hother.orbitree.cli import main

raise SystemExit(main())
