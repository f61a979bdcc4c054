"""Regenerate ``src/promptshrink/data/en_lexicon.tsv``.

Closed-class words are listed in full; open-class verbs are expanded with
regular inflections plus an irregular table. Earlier assignments win, so the
order of the groups in ``build`` encodes precedence for ambiguous words.

    python tools/build_lexicon.py
"""

from __future__ import annotations

from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "promptshrink" / "data" / "en_lexicon.tsv"

DETERMINERS = """
a an the this that these those every each either neither some any no another
such my your his her its our their whose all both half several many much few
fewer little less most enough various certain whichever whatever
"""

PRONOUNS = """
i me you he him she it we us they them myself yourself himself herself itself
ourselves yourselves themselves mine yours hers ours theirs who whom what
which someone somebody something anyone anybody anything everyone everybody
everything nobody nothing none one oneself whoever whomever
"""

PREPOSITIONS = """
about above across after against along amid among around as at before behind
below beneath beside besides between beyond by concerning despite down during
except for from in inside into like near of off on onto out outside over past
per regarding since through throughout till to toward towards under underneath
unlike until up upon via with within without amongst aboard alongside
"""

CONJUNCTIONS = """
and or but nor yet so because although though unless if whereas while whether
than that once lest whenever wherever however therefore thus hence moreover
furthermore nevertheless nonetheless consequently otherwise meanwhile
accordingly
"""

NUMERALS = """
zero one two three four five six seven eight nine ten eleven twelve thirteen
fourteen fifteen sixteen seventeen eighteen nineteen twenty thirty forty fifty
sixty seventy eighty ninety hundred thousand million billion trillion first
second third fourth fifth sixth seventh eighth ninth tenth dozen
"""

ADVERBS = """
very really quite extremely rather too so just actually basically simply
literally truly highly totally completely entirely fully absolutely utterly
particularly especially incredibly remarkably deeply greatly largely mostly
nearly almost always never often sometimes usually seldom rarely ever already
still again also even only here there now then soon later today tomorrow
yesterday tonight yet perhaps maybe certainly definitely probably possibly
clearly obviously indeed instead anyway somewhat slightly fairly pretty
merely barely hardly scarcely quickly slowly carefully easily badly well
fast hard early late abroad ahead apart away back forward forth home together
please not seemingly formally sharply strongly decisively hereby thereby
once twice thrice furthermore moreover nevertheless however therefore thus
hence consequently meanwhile otherwise accordingly elsewhere everywhere
somewhere anywhere nowhere upstairs downstairs overseas recently currently
previously formerly initially finally eventually ultimately immediately
directly exactly precisely approximately roughly generally typically normally
frequently occasionally constantly continually regularly increasingly
relatively comparatively significantly substantially considerably dramatically

"""

ADJECTIVES = """
good bad new old big small large little long short high low great young
important different public able early late major real best better worse worst
free full special easy hard clear recent certain personal open red white black
blue green strong whole true sure possible local social national international
political economic financial human local general main simple current final
serious local natural similar available likely single private past difficult
common poor dead happy ready huge wide deep legal basic medical military
cultural physical federal central key total senior top local environmental
numerous external internal global geopolitical various entire additional
significant strange slow quick fast heavy light hot cold warm cool dark bright
beautiful ugly rich cheap expensive modern ancient famous popular angry
unprecedented aggressive generous decent tough mild huge tiny vast severe fierce
excessive executive corporate institutional annual leading lackluster strategic
operational underlying exceptional controversial preliminary nonbinding
sacrosanct similar british american french chinese english european mobile
efficient energy-efficient green clean dirty safe dangerous healthy sick
busy lazy smart stupid kind cruel calm quiet loud noisy fresh stale empty
brave weak proud shy polite rude honest fair unfair correct wrong
sweet sour bitter salty soft smooth rough sharp dull thick thin wet dry
narrow broad flat round square steep gentle wild tame rare frequent usual
unusual normal odd even equal extra fine grand lucky nice sad silly
sorry tall wise worried missing willing lonely lovely friendly elderly
costly daily weekly monthly yearly likely unlikely early only
chief former latter upper lower inner outer further farther
maximum minimum average typical potential critical crucial essential vital
massive minor primary secondary future present absent alive aware afraid
"""

NOUNS = """
time year people way day man thing woman life child world school state family
student group country problem hand part place case week company system program
question work government number night point home water room mother area money
story fact month lot right study book eye job word business issue side kind
head house service friend father power hour game line end member law car city
community name president team minute idea kid body information back parent face
others level office door health person art war history party result change
morning reason research girl guy moment air teacher force education foot boy age
policy music market sense nation plan college interest death experience effect
class control care field development role effort rate heart drug show leader
light voice wife police mind price report decision son view relationship town
road arm difference value building action model season society tax director
position player record paper space ground form event official matter center
couple site project activity star table need court oil situation cost industry
figure street image phone data picture practice piece land product doctor wall
patient worker news test movie north love support technology step baby computer
type attention film tree source organization hair window evidence population
site economy challenge challenges factor fluctuation tension shareholder
investor executive package vote salary pension bonus loss profit dividend
chairman board meeting proxy firm bank group rebellion governance remuneration
compensation opposition increase percent billion penalty catastrophe spill
rig disaster culture safety employee injury peer return balance sheet deck
counterpart pay reward task agreement deal stake target payout proposal
resolution jurisdiction property motion comment council mayor county project
home improvement solar efficiency item manager recommendation cat cats dog
birds bird fish horse cow animal plant food fruit apple pear plum bread milk
tea coffee sugar salt table chair bed desk pen pencil letter email message
newspaper magazine journal article chapter page sentence paragraph text
document prompt token chunk summary answer query method algorithm network
computer machine engine tool device screen keyboard file folder server
client user customer seller buyer owner tenant neighbour neighbor village
river lake sea ocean mountain hill valley forest island beach desert sky sun
moon rain snow wind storm cloud weather summer winter spring autumn fall
morning evening afternoon weekend holiday trip journey flight train bus ship
boat bike ticket station airport hotel restaurant shop store office factory
farm garden park bridge tower castle church hospital university library museum
theater theatre stadium prison army navy soldier officer captain king queen
prince princess emperor citizen voter candidate election campaign vote speech
debate crisis conflict peace treaty alliance enemy victory defeat battle
weapon bomb gun attack threat risk danger fear hope dream goal plan strategy
budget fund loan debt credit income revenue expense spending tax asset share
stock bond currency dollar euro pound cent inflation recession growth trade
export import supply demand production consumption investment capital labor
labour wage job career skill knowledge science theory experiment analysis
evidence result conclusion argument claim opinion belief truth lie secret
mystery problem solution answer reason cause consequence outcome impact
benefit advantage disadvantage cost price quality quantity amount size shape
color colour weight height length width depth speed distance direction
position location region zone territory border coast capital city town
neighbourhood neighborhood street avenue road highway path route corner
edge surface center centre middle top bottom front rear inside outside
author columnist opinion pay loss column gulf mexico crude barrel environment
predecessor culture concern risk number low return data blowout line decks
figure period base boost reward share industry task rewards shares advisory
director directors bonuses plans requirements rise bump portion amount
officer awards prices slump jobs spending firm report areas record targets
flow profits spokesman drop price objections time chief executives firms
investors matter meeting host issues notice proposals election version
"""

VERBS = """
be have do say go get make know think take see come want look use find give
tell work call try ask need feel become leave put mean keep let begin seem help
talk turn start show hear play run move like live believe hold bring happen
write provide sit stand lose pay meet include continue set learn change lead
understand watch follow stop create speak read allow add spend grow open walk
win offer remember love consider appear buy wait serve die send expect build
stay fall cut reach kill remain suggest raise pass sell require report decide
pull return explain hope develop carry break receive agree support hit produce
eat cover catch draw choose cause point listen realize place close involve
increase reject rebel protest mount criticize award recommend announce relate
inflate amount plummet slash manage question earn respond defend signal threaten
navigate contend heap adjust discuss approve outpace note raise propose
reduce face handle square trade work clean taint rank agree clear start
rebuild acknowledge sit understand seek determine ignore introduce brand
express tell force think vote adopt join consent represent complete include
sleep walk run jump swim fly drive ride climb sing dance paint cook wash
clean fix repair open close push pull throw kick shoot fight argue shout
cry laugh smile wave nod shake touch hold carry lift drop pick fill empty
pour mix stir boil fry bake burn melt freeze shine rain snow blow flow
float sink rise fall drift roll slide slip trip crash hurt heal cure treat
save protect guard defend attack invade conquer rule govern elect appoint
hire fire employ retire resign quit join leave enter exit arrive depart
travel visit return stay wait rest relax enjoy hate prefer wish want need
own possess belong borrow lend steal rob cheat lie trust doubt fear worry
wonder imagine guess suppose assume suspect prove test check measure count
calculate compute estimate predict forecast plan prepare organize arrange
design invent discover explore examine study teach train practice improve
grow shrink expand extend stretch compress summarize simplify retain delete
remove keep hide reveal display present publish print post share send
deliver ship transport export import produce manufacture assemble install
operate maintain repair replace upgrade update modify alter adapt adjust
convert transform translate interpret analyze analyse evaluate assess judge
compare contrast differ vary range exceed surpass beat lose win fail succeed
achieve accomplish attain obtain acquire gain earn collect gather select
choose decide determine settle resolve solve answer reply respond react
behave act perform function serve fit suit match belong matter count weigh
cost charge owe invest spend waste lend bet risk gamble bid offer accept
refuse deny admit confess claim state declare announce inform notify warn
advise urge encourage persuade convince insist demand request order command
instruct direct guide lead follow chase hunt search seek locate find lose
miss hit strike knock beat kick slap punch grab seize release free rescue
capture arrest detain jail punish fine sue charge convict sentence pardon
forgive blame accuse criticise criticize praise thank welcome greet invite
host entertain amuse bore annoy bother disturb upset anger please satisfy
surprise shock scare frighten calm comfort support assist help aid benefit
harm damage destroy ruin spoil wreck demolish construct build found establish
launch open shut lock unlock seal wrap cover uncover expose mark sign stamp
label list rank rate score grade sort file record register enroll subscribe
cast
"""

IRREGULAR = {
    "be": ["am", "is", "are", "was", "were", "been", "being"],
    "have": ["has", "had", "having"],
    "do": ["does", "did", "done", "doing"],
    "say": ["says", "said"],
    "go": ["goes", "went", "gone"],
    "get": ["got", "gotten", "getting"],
    "make": ["made"],
    "know": ["knew", "known"],
    "think": ["thought"],
    "take": ["took", "taken"],
    "see": ["saw", "seen"],
    "come": ["came"],
    "give": ["gave", "given"],
    "tell": ["told"],
    "feel": ["felt"],
    "become": ["became"],
    "leave": ["left"],
    "put": ["putting"],
    "mean": ["meant"],
    "keep": ["kept"],
    "let": ["letting"],
    "begin": ["began", "begun", "beginning"],
    "hear": ["heard"],
    "run": ["ran", "running"],
    "hold": ["held"],
    "bring": ["brought"],
    "write": ["wrote", "written"],
    "sit": ["sat", "sitting"],
    "stand": ["stood"],
    "lose": ["lost"],
    "pay": ["paid"],
    "meet": ["met"],
    "lead": ["led"],
    "understand": ["understood"],
    "speak": ["spoke", "spoken"],
    "read": [],
    "spend": ["spent"],
    "grow": ["grew", "grown"],
    "win": ["won", "winning"],
    "buy": ["bought"],
    "send": ["sent"],
    "build": ["built"],
    "fall": ["fell", "fallen"],
    "cut": ["cutting"],
    "sell": ["sold"],
    "break": ["broke", "broken"],
    "catch": ["caught"],
    "draw": ["drew", "drawn"],
    "choose": ["chose", "chosen"],
    "eat": ["ate", "eaten"],
    "hit": ["hitting"],
    "rise": ["rose", "risen"],
    "seek": ["sought"],
    "sleep": ["slept"],
    "swim": ["swam", "swimming"],
    "fly": ["flew", "flown"],
    "drive": ["drove", "driven"],
    "ride": ["rode", "ridden"],
    "sing": ["sang", "sung"],
    "shoot": ["shot"],
    "fight": ["fought"],
    "throw": ["threw", "thrown"],
    "shake": ["shook", "shaken"],
    "freeze": ["froze", "frozen"],
    "shine": ["shone"],
    "blow": ["blew", "blown"],
    "sink": ["sank", "sunk"],
    "hurt": [],
    "lend": ["lent"],
    "steal": ["stole", "stolen"],
    "lie": ["lay", "lain", "lying"],
    "teach": ["taught"],
    "bet": ["betting"],
    "bid": ["bidding"],
    "forgive": ["forgave", "forgiven"],
    "strike": ["struck"],
    "seize": [],
    "shut": ["shutting"],
    "slide": ["slid"],
    "cast": ["casting"],
    "quit": ["quitting"],
}

RELATIONS = [
    ("but", "Contrast"),
    ("however", "Contrast"),
    ("yet", "Contrast"),
    ("whereas", "Contrast"),
    ("nevertheless", "Contrast"),
    ("nonetheless", "Contrast"),
    ("on the other hand", "Contrast"),
    ("although", "Concessive"),
    ("though", "Concessive"),
    ("even though", "Concessive"),
    ("despite", "Concessive"),
    ("in spite of", "Concessive"),
    ("because", "Causal"),
    ("since", "Causal"),
    ("because of", "Causal"),
    ("due to", "Causal"),
    ("so", "Result"),
    ("therefore", "Result"),
    ("thus", "Result"),
    ("hence", "Result"),
    ("consequently", "Result"),
    ("as a result", "Result"),
    ("if", "Conditional"),
    ("unless", "Conditional"),
    ("provided that", "Conditional"),
    ("moreover", "Progressive"),
    ("furthermore", "Progressive"),
    ("in addition", "Progressive"),
    ("what is more", "Progressive"),
    ("than", "Comparative"),
    ("compared to", "Comparative"),
    ("compared with", "Comparative"),
    ("and", "Coordinate"),
    ("or", "Coordinate"),
]


def _words(block: str) -> list[str]:
    return [w for w in block.split() if w.isalpha() or "-" in w]


def _third_person(v: str) -> str:
    if v.endswith(("s", "x", "z", "ch", "sh", "o")):
        return v + "es"
    if v.endswith("y") and v[-2] not in "aeiou":
        return v[:-1] + "ies"
    return v + "s"


def _past(v: str) -> str:
    if v.endswith("e"):
        return v + "d"
    if v.endswith("y") and v[-2] not in "aeiou":
        return v[:-1] + "ied"
    return v + "ed"


def _gerund(v: str) -> str:
    if v.endswith("ie"):
        return v[:-2] + "ying"
    if v.endswith("e") and not v.endswith(("ee", "ye", "oe")):
        return v[:-1] + "ing"
    return v + "ing"


def _plural(n: str) -> str:
    if n.endswith(("s", "x", "z", "ch", "sh")):
        return n + "es"
    if n.endswith("y") and n[-2] not in "aeiou":
        return n[:-1] + "ies"
    return n + "s"


def build() -> tuple[dict[str, str], list[tuple[str, str]]]:
    entries: dict[str, str] = {}

    def put(word: str, pos: str) -> None:
        entries.setdefault(word, pos)

    for pos, block in [
        ("determiner", DETERMINERS),
        ("pronoun", PRONOUNS),
        ("conjunction", CONJUNCTIONS),
        ("preposition", PREPOSITIONS),
        ("numeral", NUMERALS),
        ("adverb", ADVERBS),
        ("adjective", ADJECTIVES),
    ]:
        for w in _words(block):
            put(w, pos)

    verbs = list(dict.fromkeys(_words(VERBS)))
    nouns = list(dict.fromkeys(_words(NOUNS)))
    # ed/ing forms are verbs even when the base is a noun ("facing", "voted")
    for v in verbs:
        irregular = IRREGULAR.get(v)
        forms = [_past(v), _gerund(v)]
        if irregular is not None:
            forms = [f for f in forms if not f.endswith("ed")] + irregular
        for form in forms:
            put(form, "verb")
    for n in nouns:
        put(n, "noun")
        put(_plural(n), "noun")
    for v in verbs:
        put(v, "verb")
        put(_third_person(v), "verb")
    return entries, RELATIONS


def main() -> None:
    entries, relations = build()
    lines = ["# promptshrink default English lexicon", "[pos]"]
    lines += [f"{w}\t{p}" for w, p in sorted(entries.items())]
    lines += ["", "[relations]"]
    lines += [f"{t}\t{k}" for t, k in relations]
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {len(entries)} pos entries, {len(relations)} triggers -> {OUT}")


if __name__ == "__main__":
    main()
